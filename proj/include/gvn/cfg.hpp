#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gvn/program.hpp"

namespace gvn {

using BlockId = std::size_t;

struct BasicBlock {
  std::vector<Statement> statements;
  std::vector<BlockId> preds;
  std::vector<BlockId> succs;
};

// A program point: the position before statement `index` of `block`.
// `index == statements.size()` is the end of the block.
struct Position {
  BlockId block = 0;
  std::size_t index = 0;

  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position&, const Position&) = default;
};

class Cfg {
 public:
  static Cfg build(const Program& program);

  const std::vector<BasicBlock>& blocks() const { return blocks_; }
  const BasicBlock& block(BlockId id) const { return blocks_.at(id); }
  BlockId entry() const { return entry_; }
  BlockId exit() const { return exit_; }

  bool is_join(BlockId id) const { return blocks_.at(id).preds.size() >= 2; }
  std::vector<BlockId> joins() const;

  // Labeled points in source order, including the synthetic `__entry` and
  // `__exit` (the latter only when it differs from the entry position).
  const std::vector<std::pair<std::string, Position>>& points() const { return points_; }
  Position point(std::string_view label) const;
  bool has_point(std::string_view label) const;

  // Every position between statements, across all blocks.
  std::size_t program_point_count() const;

  // Reverse post-order from the entry.
  std::vector<BlockId> reverse_post_order() const;

  std::vector<std::pair<BlockId, BlockId>> edges() const;

  const std::set<std::string>& variables() const { return variables_; }

 private:
  std::vector<BasicBlock> blocks_;
  BlockId entry_ = 0;
  BlockId exit_ = 0;
  std::vector<std::pair<std::string, Position>> points_;
  std::set<std::string> variables_;
};

}  // namespace gvn
