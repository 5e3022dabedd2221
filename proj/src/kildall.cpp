#include "gvn/kildall.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>

#include "gvn/error.hpp"

namespace gvn {

namespace {

using ClassId = StructuredPartition::ClassId;

// Relabels arbitrary 64-bit keys into dense ids by first occurrence.
std::vector<ClassId> canonicalize(const std::vector<std::uint64_t>& keys) {
  std::unordered_map<std::uint64_t, ClassId> ids;
  ids.reserve(keys.size());
  std::vector<ClassId> out(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    auto [it, inserted] = ids.emplace(keys[i], static_cast<ClassId>(ids.size()));
    out[i] = it->second;
  }
  return out;
}

struct FreshSig {
  Op op;
  std::uint64_t left;
  std::uint64_t right;

  friend bool operator==(const FreshSig&, const FreshSig&) = default;
};

struct FreshSigHash {
  std::size_t operator()(const FreshSig& s) const {
    return std::hash<std::uint64_t>{}(s.left * 0x9e3779b97f4a7c15ULL ^ (s.right + static_cast<std::uint64_t>(s.op)));
  }
};

std::uint64_t pack(std::uint64_t hi, std::uint64_t lo) { return (hi << 32) | lo; }

std::uint64_t signature(Op op, std::uint64_t l, std::uint64_t r) {
  // Class keys stay below 2^30, which leaves room for the operator.
  return (static_cast<std::uint64_t>(op) << 60) | (l << 30) | r;
}

}  // namespace

StructuredPartition::StructuredPartition(std::shared_ptr<const Universe> universe, std::vector<ClassId> class_of)
    : universe_(std::move(universe)), class_of_(std::move(class_of)) {
  assert(class_of_.size() == universe_->size());
  for (ClassId c : class_of_) class_count_ = std::max<std::size_t>(class_count_, c + 1);
}

std::vector<std::vector<Universe::Index>> StructuredPartition::classes() const {
  std::vector<std::vector<Universe::Index>> out(class_count_);
  for (Universe::Index i = 0; i < class_of_.size(); ++i) out[class_of_[i]].push_back(i);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.front() < b.front();
  });
  return out;
}

std::vector<Term> StructuredPartition::class_members(const Term& t) const {
  ClassId c = class_of_[universe_->require(t)];
  std::vector<Term> out;
  for (Universe::Index i = 0; i < class_of_.size(); ++i) {
    if (class_of_[i] == c) out.push_back(universe_->term(i));
  }
  return out;
}

StructuredPartition kildall_initial(std::shared_ptr<const Universe> universe) {
  std::vector<ClassId> ids(universe->size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<ClassId>(i);
  return StructuredPartition(std::move(universe), std::move(ids));
}

StructuredPartition kildall_transfer(const StructuredPartition& p, const Statement& s, Warnings* warnings) {
  const Universe& u = p.universe();
  const auto& old = p.class_ids();
  const std::size_t n = u.size();

  // Congruence table of the old partition: (op, class, class) -> class.
  std::unordered_map<std::uint64_t, ClassId> table;
  table.reserve(n);
  for (Universe::Index i = 0; i < n; ++i) {
    const auto& e = u.entry(i);
    if (e.kind == Term::Kind::Apply) table.emplace(signature(e.op, old[e.left], old[e.right]), old[i]);
  }

  // New keys: an old class id (tag 0) or a fresh class id (tag 1). Fresh
  // ids are allocated per distinct substituted signature, so congruent
  // terms without an old class still share one.
  std::unordered_map<FreshSig, std::uint64_t, FreshSigHash> fresh;
  std::uint64_t fresh_count = 0;
  auto fresh_key = [&](const FreshSig& sig) {
    auto [it, inserted] = fresh.emplace(sig, fresh_count);
    if (inserted) ++fresh_count;
    return pack(1, it->second);
  };

  std::uint64_t target_key;
  if (auto rhs = u.index_of(s.rhs)) {
    target_key = pack(0, old[*rhs]);
  } else {
    target_key = pack(1, fresh_count++);
    if (warnings) {
      warnings->push_back("rhs of '" + s.target + " := " + s.rhs.to_string() + "' exceeds the term universe bound " +
                          std::to_string(u.spec().bound) + "; target placed in a fresh class");
    }
  }

  std::vector<std::uint64_t> keys(n);
  std::vector<bool> mentions(n, false);
  for (Universe::Index i = 0; i < n; ++i) {
    const auto& e = u.entry(i);
    switch (e.kind) {
      case Term::Kind::Variable:
        if (u.term(i).name() == s.target) {
          mentions[i] = true;
          keys[i] = target_key;
        } else {
          keys[i] = pack(0, old[i]);
        }
        break;
      case Term::Kind::Constant:
        keys[i] = pack(0, old[i]);
        break;
      case Term::Kind::Apply: {
        mentions[i] = mentions[e.left] || mentions[e.right];
        if (!mentions[i]) {
          keys[i] = pack(0, old[i]);
          break;
        }
        std::uint64_t kl = keys[e.left];
        std::uint64_t kr = keys[e.right];
        if ((kl >> 32) == 0 && (kr >> 32) == 0) {
          auto it = table.find(signature(e.op, kl & 0xffffffffu, kr & 0xffffffffu));
          if (it != table.end()) {
            keys[i] = pack(0, it->second);
            break;
          }
        }
        keys[i] = fresh_key(FreshSig{e.op, kl, kr});
        break;
      }
    }
  }
  return StructuredPartition(p.universe_ptr(), canonicalize(keys));
}

StructuredPartition kildall_meet(const StructuredPartition& p1, const StructuredPartition& p2) {
  assert(&p1.universe() == &p2.universe() || p1.universe().size() == p2.universe().size());
  const auto& a = p1.class_ids();
  const auto& b = p2.class_ids();
  std::vector<std::uint64_t> keys(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) keys[i] = pack(a[i], b[i]);
  return StructuredPartition(p1.universe_ptr(), canonicalize(keys));
}

bool kildall_equiv(const StructuredPartition& p, const Term& t1, const Term& t2) {
  const Universe& u = p.universe();
  return p.class_of(u.require(t1)) == p.class_of(u.require(t2));
}

std::string render_partition(const StructuredPartition& p, bool only_informative) {
  const Universe& u = p.universe();
  std::string out = "{";
  bool first_class = true;
  for (const auto& cls : p.classes()) {
    if (only_informative && cls.size() == 1 && !u.term(cls.front()).is_variable()) continue;
    out += first_class ? " [" : ", [";
    first_class = false;
    for (std::size_t k = 0; k < cls.size(); ++k) {
      if (k) out += ", ";
      out += u.term(cls[k]).to_string();
    }
    out += "]";
  }
  out += first_class ? "}" : " }";
  return out;
}

}  // namespace gvn
