#pragma once

#include <algorithm>
#include <cctype>
#include <memory>
#include <string>
#include <vector>

#include "affmod/errors.hpp"

namespace affmod {

// Ordered variable names; the order is fixed at creation and defines the
// graded-lex monomial order. Contexts compare by their name lists.
class VarContext {
public:
  explicit VarContext(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) fail(ErrKind::InvalidInput, "empty variable context");
    for (const auto& n : names_) {
      if (n.empty() || !(std::isalpha((unsigned char)n[0]) || n[0] == '_'))
        fail(ErrKind::InvalidInput, "invalid variable name '" + n + "'");
      for (char c : n)
        if (!(std::isalnum((unsigned char)c) || c == '_'))
          fail(ErrKind::InvalidInput, "invalid variable name '" + n + "'");
    }
    for (size_t i = 0; i < names_.size(); ++i)
      for (size_t j = i + 1; j < names_.size(); ++j)
        if (names_[i] == names_[j])
          fail(ErrKind::InvalidInput, "duplicate variable '" + names_[i] + "'");
  }

  size_t arity() const { return names_.size(); }
  const std::string& name(size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }

  long index_of(const std::string& v) const {
    auto it = std::find(names_.begin(), names_.end(), v);
    return it == names_.end() ? -1 : it - names_.begin();
  }
  size_t require(const std::string& v) const {
    long i = index_of(v);
    if (i < 0) fail(ErrKind::InvalidInput, "unknown variable '" + v + "'");
    return (size_t)i;
  }

  bool operator==(const VarContext& o) const { return names_ == o.names_; }
  bool operator!=(const VarContext& o) const { return !(*this == o); }

  // Same context with extra variables appended.
  VarContext extended(const std::vector<std::string>& extra) const {
    std::vector<std::string> ns = names_;
    ns.insert(ns.end(), extra.begin(), extra.end());
    return VarContext(std::move(ns));
  }

  // First name from the candidate family not already present.
  std::string fresh(const std::vector<std::string>& candidates) const {
    for (const auto& c : candidates)
      if (index_of(c) < 0) return c;
    for (int i = 1;; ++i) {
      std::string c = candidates.front() + std::to_string(i);
      if (index_of(c) < 0) return c;
    }
  }

private:
  std::vector<std::string> names_;
};

using Ctx = std::shared_ptr<const VarContext>;

inline Ctx make_ctx(std::vector<std::string> names) {
  return std::make_shared<const VarContext>(std::move(names));
}

inline void require_same_ctx(const Ctx& a, const Ctx& b) {
  if (a == b) return;
  if (!a || !b || *a != *b) fail(ErrKind::ContextMismatch, "variable contexts differ");
}

} // namespace affmod
