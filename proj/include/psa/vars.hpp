#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace psa {

enum class VarKind { Clock, Parameter, Auxiliary };

struct VarId {
  uint32_t index = UINT32_MAX;
  VarKind kind = VarKind::Clock;

  bool valid() const { return index != UINT32_MAX; }
  bool operator==(const VarId& o) const { return index == o.index; }
  bool operator!=(const VarId& o) const { return index != o.index; }
  bool operator<(const VarId& o) const { return index < o.index; }
};

/// One registry per analysis; all automata, polyhedra and parameter maps of a
/// network share it. Frozen before exploration starts, after which it is
/// read-only and safe to share between threads.
class VarRegistry {
 public:
  VarId add_clock(const std::string& name) { return add(name, VarKind::Clock); }
  VarId add_parameter(const std::string& name) { return add(name, VarKind::Parameter); }
  VarId add_auxiliary(const std::string& name) { return add(name, VarKind::Auxiliary); }

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  uint32_t size() const { return static_cast<uint32_t>(names_.size()); }
  const std::string& name(VarId v) const { return names_.at(v.index); }
  const std::string& name(uint32_t i) const { return names_.at(i); }
  VarKind kind(uint32_t i) const { return kinds_.at(i); }

  VarId id(uint32_t i) const { return VarId{i, kinds_.at(i)}; }

  std::optional<VarId> find(const std::string& name) const {
    for (uint32_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return id(i);
    return std::nullopt;
  }

  std::vector<VarId> of_kind(VarKind k) const {
    std::vector<VarId> out;
    for (uint32_t i = 0; i < names_.size(); ++i)
      if (kinds_[i] == k) out.push_back(id(i));
    return out;
  }
  std::vector<VarId> clocks() const { return of_kind(VarKind::Clock); }
  std::vector<VarId> parameters() const { return of_kind(VarKind::Parameter); }

 private:
  VarId add(const std::string& name, VarKind k) {
    if (frozen_) throw std::logic_error("VarRegistry is frozen");
    if (find(name)) throw std::invalid_argument("duplicate variable name: " + name);
    names_.push_back(name);
    kinds_.push_back(k);
    return VarId{static_cast<uint32_t>(names_.size() - 1), k};
  }

  std::vector<std::string> names_;
  std::vector<VarKind> kinds_;
  bool frozen_ = false;
};

}  // namespace psa
