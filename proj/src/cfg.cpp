#include "gvn/cfg.hpp"

#include <algorithm>
#include <functional>

#include "gvn/error.hpp"

namespace gvn {

namespace {

class Builder {
 public:
  explicit Builder(std::vector<BasicBlock>& blocks, std::vector<std::pair<std::string, Position>>& points)
      : blocks_(blocks), points_(points) {}

  BlockId fresh() {
    blocks_.emplace_back();
    return blocks_.size() - 1;
  }

  void edge(BlockId from, BlockId to) {
    blocks_[from].succs.push_back(to);
    blocks_[to].preds.push_back(from);
  }

  // Lowers `items` starting in block `cur`; returns the block control
  // falls out of.
  BlockId lower(const std::vector<Item>& items, BlockId cur) {
    for (const Item& it : items) {
      if (auto* s = std::get_if<Statement>(&it.node)) {
        blocks_[cur].statements.push_back(*s);
      } else if (auto* l = std::get_if<Label>(&it.node)) {
        points_.emplace_back(l->name, Position{cur, blocks_[cur].statements.size()});
      } else if (auto* b = std::get_if<Branch>(&it.node)) {
        BlockId then_first = fresh();
        BlockId else_first = fresh();
        edge(cur, then_first);
        edge(cur, else_first);
        BlockId then_last = lower(b->then_body, then_first);
        BlockId else_last = lower(b->else_body, else_first);
        BlockId join = fresh();
        edge(then_last, join);
        edge(else_last, join);
        cur = join;
      } else if (auto* w = std::get_if<Loop>(&it.node)) {
        BlockId head = fresh();
        edge(cur, head);
        BlockId body_first = fresh();
        edge(head, body_first);
        BlockId body_last = lower(w->body, body_first);
        edge(body_last, head);
        BlockId after = fresh();
        edge(head, after);
        cur = after;
      }
    }
    return cur;
  }

 private:
  std::vector<BasicBlock>& blocks_;
  std::vector<std::pair<std::string, Position>>& points_;
};

}  // namespace

Cfg Cfg::build(const Program& program) {
  Cfg g;
  std::vector<std::pair<std::string, Position>> user_points;
  Builder b(g.blocks_, user_points);
  g.entry_ = b.fresh();
  g.exit_ = b.lower(program.items, g.entry_);

  Position entry_pos{g.entry_, 0};
  Position exit_pos{g.exit_, g.blocks_[g.exit_].statements.size()};
  g.points_.emplace_back(std::string(kEntryPoint), entry_pos);
  for (auto& p : user_points) g.points_.push_back(std::move(p));
  if (exit_pos != entry_pos) g.points_.emplace_back(std::string(kExitPoint), exit_pos);
  g.variables_ = program.variables();
  return g;
}

std::vector<BlockId> Cfg::joins() const {
  std::vector<BlockId> out;
  for (BlockId b = 0; b < blocks_.size(); ++b) {
    if (is_join(b)) out.push_back(b);
  }
  return out;
}

Position Cfg::point(std::string_view label) const {
  for (const auto& [name, pos] : points_) {
    if (name == label) return pos;
  }
  throw UnknownPointError("unknown program point '" + std::string(label) + "'");
}

bool Cfg::has_point(std::string_view label) const {
  return std::any_of(points_.begin(), points_.end(), [&](const auto& p) { return p.first == label; });
}

std::size_t Cfg::program_point_count() const {
  std::size_t n = 0;
  for (const BasicBlock& b : blocks_) n += b.statements.size() + 1;
  return n;
}

std::vector<BlockId> Cfg::reverse_post_order() const {
  std::vector<BlockId> post;
  std::vector<bool> seen(blocks_.size(), false);
  // Iterative DFS; successor order is the construction order.
  std::vector<std::pair<BlockId, std::size_t>> stack{{entry_, 0}};
  seen[entry_] = true;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < blocks_[node].succs.size()) {
      BlockId s = blocks_[node].succs[next++];
      if (!seen[s]) {
        seen[s] = true;
        stack.emplace_back(s, 0);
      }
    } else {
      post.push_back(node);
      stack.pop_back();
    }
  }
  std::reverse(post.begin(), post.end());
  return post;
}

std::vector<std::pair<BlockId, BlockId>> Cfg::edges() const {
  std::vector<std::pair<BlockId, BlockId>> out;
  for (BlockId b = 0; b < blocks_.size(); ++b) {
    for (BlockId s : blocks_[b].succs) out.emplace_back(b, s);
  }
  return out;
}

}  // namespace gvn
