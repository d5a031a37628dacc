#include "psa/region.hpp"

#include <algorithm>
#include <stdexcept>

namespace psa {

Region Region::of(const Polyhedron& p) {
  Region r(p.dims());
  r.add(p);
  return r;
}

void Region::add(Polyhedron p) {
  if (p.dims() != dims_) throw std::invalid_argument("universe mismatch");
  p.canonicalize();
  if (p.syntactically_empty() || p.is_empty()) return;
  auto it = std::lower_bound(ds_.begin(), ds_.end(), p);
  if (it != ds_.end() && *it == p) return;
  ds_.insert(it, std::move(p));
}

void Region::add(const Region& r) {
  for (const auto& d : r.ds_) add(d);
}

Region Region::intersect(const Region& a, const Region& b) {
  if (a.dims_ != b.dims_) throw std::invalid_argument("universe mismatch");
  Region out(a.dims_);
  for (const auto& p : a.ds_)
    for (const auto& q : b.ds_) out.add(Polyhedron::intersect(p, q));
  return out;
}

Region Region::complement(const Region& r, const Polyhedron& within) {
  if (r.dims_ != within.dims()) throw std::invalid_argument("universe mismatch");
  // start from {within}; carve out each disjunct:
  // within \ P = union over i of (within & c_1 & ... & c_{i-1} & !c_i)
  std::vector<Polyhedron> pieces{within};
  for (const auto& P : r.ds_) {
    std::vector<Polyhedron> next;
    for (const auto& piece : pieces) {
      Polyhedron prefix = piece;
      for (const auto& c : P.constraints()) {
        for (const auto& n : c.negation()) {
          Polyhedron cut = prefix;
          cut.add(n);
          cut.canonicalize();
          if (!cut.syntactically_empty() && !cut.is_empty()) next.push_back(std::move(cut));
        }
        prefix.add(c);
        prefix.canonicalize();
        if (prefix.syntactically_empty()) break;
      }
    }
    pieces = std::move(next);
    if (pieces.empty()) break;
  }
  Region out(r.dims_);
  for (auto& p : pieces) out.add(std::move(p));
  return out;
}

bool Region::covers(const Polyhedron& p) const {
  Region rest = complement(*this, p);
  return rest.is_empty();
}

bool Region::equal(const Region& a, const Region& b) {
  if (a.dims_ != b.dims_) throw std::invalid_argument("universe mismatch");
  for (const auto& p : a.ds_)
    if (!b.covers(p)) return false;
  for (const auto& q : b.ds_)
    if (!a.covers(q)) return false;
  return true;
}

bool Region::contains_point(const std::vector<Rational>& point) const {
  for (const auto& d : ds_)
    if (d.contains_point(point)) return true;
  return false;
}

std::string Region::text(const VarRegistry& reg) const {
  if (ds_.empty()) return "false";
  std::string out;
  for (size_t i = 0; i < ds_.size(); ++i) {
    if (i) out += "\nOR\n";
    out += ds_[i].text(reg);
  }
  return out;
}

}  // namespace psa
