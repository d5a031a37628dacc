#include "psa/polyhedron.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace psa {

namespace {

// One Fourier-Motzkin step: eliminate column `col` from `rows`.
// Returns false as soon as an infeasible constant row appears.
// Strictness: Lt combined with anything yields Lt; Le+Le yields Le.
// Equalities are used as substitution pivots.
bool fm_step(std::vector<LinearConstraint>& rows, uint32_t col) {
  // pivot on an equality if one mentions the column
  int pivot = -1;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].rel() == Rel::Eq && rows[i].coeff(col) != 0) {
      if (pivot < 0 || abs(rows[i].coeff(col)) < abs(rows[pivot].coeff(col)))
        pivot = static_cast<int>(i);
    }
  }
  std::vector<LinearConstraint> out;
  out.reserve(rows.size());
  auto push = [&out](LinearConstraint&& c) {
    if (c.trivially_true()) return true;
    if (c.trivially_false()) return false;
    out.push_back(std::move(c));
    return true;
  };
  const uint32_t dims = rows.empty() ? 0 : rows[0].dims();
  auto scaled_sum = [dims, col](const LinearConstraint& a, const Integer& ma,
                                const LinearConstraint& b, const Integer& mb, Rel rel) {
    std::vector<Integer> cs(dims);
    for (uint32_t i = 0; i < dims; ++i) cs[i] = a.coeff(i) * ma + b.coeff(i) * mb;
    assert(cs[col] == 0);
    return LinearConstraint(std::move(cs), a.constant() * ma + b.constant() * mb, rel);
  };

  if (pivot >= 0) {
    const LinearConstraint p = rows[pivot];
    const Integer& pj = p.coeff(col);
    Integer apj = abs(pj);
    for (size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(i) == pivot) continue;
      const LinearConstraint& r = rows[i];
      if (r.coeff(col) == 0) {
        if (!push(LinearConstraint(r))) return false;
        continue;
      }
      // r' = |pj| * r - (sgn(pj) * r_j) * p ; multiplier on r stays positive
      Integer mb = -(r.coeff(col) * (pj > 0 ? 1 : -1));
      if (!push(scaled_sum(r, apj, p, mb, r.rel()))) return false;
    }
    rows = std::move(out);
    return true;
  }

  std::vector<size_t> pos, neg;
  for (size_t i = 0; i < rows.size(); ++i) {
    const Integer& c = rows[i].coeff(col);
    if (c > 0) pos.push_back(i);
    else if (c < 0) neg.push_back(i);
    else if (!push(LinearConstraint(rows[i]))) return false;
  }
  for (size_t a : pos) {
    for (size_t b : neg) {
      Rel rel = (rows[a].rel() == Rel::Lt || rows[b].rel() == Rel::Lt) ? Rel::Lt : Rel::Le;
      Integer ma = -rows[b].coeff(col);  // positive
      Integer mb = rows[a].coeff(col);   // positive
      if (!push(scaled_sum(rows[a], ma, rows[b], mb, rel))) return false;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  rows = std::move(out);
  return true;
}

// Chooses the next column to eliminate: fewest pos*neg products.
uint32_t cheapest_column(const std::vector<LinearConstraint>& rows,
                         const std::vector<uint32_t>& cols) {
  uint32_t best = cols[0];
  long best_cost = -1;
  for (uint32_t c : cols) {
    long p = 0, n = 0;
    bool has_eq = false;
    for (const auto& r : rows) {
      if (r.coeff(c) == 0) continue;
      if (r.rel() == Rel::Eq) has_eq = true;
      else if (r.coeff(c) > 0) ++p;
      else ++n;
    }
    long cost = has_eq ? 0 : p * n;
    if (best_cost < 0 || cost < best_cost) {
      best_cost = cost;
      best = c;
      if (cost == 0) break;
    }
  }
  return best;
}

// Eliminates all listed columns; true iff still feasible rows (no false row).
bool fm_eliminate(std::vector<LinearConstraint>& rows, std::vector<uint32_t> cols) {
  while (!cols.empty()) {
    uint32_t col = cheapest_column(rows, cols);
    cols.erase(std::find(cols.begin(), cols.end(), col));
    if (!fm_step(rows, col)) return false;
  }
  return true;
}

}  // namespace

Polyhedron Polyhedron::bottom(uint32_t dims) {
  Polyhedron p(dims);
  // canonical false row: 1 <= 0
  p.cs_.push_back(LinearConstraint(std::vector<Integer>(dims, Integer(0)), Integer(1), Rel::Le));
  return p;
}

bool Polyhedron::syntactically_empty() const {
  for (const auto& c : cs_)
    if (c.trivially_false()) return true;
  return false;
}

void Polyhedron::add(const LinearConstraint& c) {
  if (c.dims() != dims_) throw std::invalid_argument("universe mismatch");
  cs_.push_back(c);
}

void Polyhedron::add(const Polyhedron& other) {
  if (other.dims_ != dims_) throw std::invalid_argument("universe mismatch");
  for (const auto& c : other.cs_) cs_.push_back(c);
}

void Polyhedron::canonicalize() {
  std::vector<LinearConstraint> kept;
  kept.reserve(cs_.size());
  for (auto& c : cs_) {
    if (c.trivially_true()) continue;
    if (c.trivially_false()) {
      *this = bottom(dims_);
      return;
    }
    kept.push_back(std::move(c));
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  // dominance among inequalities with identical coefficient rows:
  // sum c x + k REL 0 is tighter for larger k, Lt beating Le at equal k.
  std::vector<LinearConstraint> dom;
  for (size_t i = 0; i < kept.size(); ++i) {
    bool drop = false;
    if (kept[i].rel() != Rel::Eq) {
      for (size_t j = 0; j < kept.size(); ++j) {
        if (i == j || kept[j].rel() == Rel::Eq) continue;
        bool same = true;
        for (uint32_t d = 0; d < dims_ && same; ++d)
          same = kept[i].coeff(d) == kept[j].coeff(d);
        if (!same) continue;
        if (kept[j].constant() > kept[i].constant() ||
            (kept[j].constant() == kept[i].constant() && kept[j].rel() == Rel::Lt &&
             kept[i].rel() == Rel::Le))
          drop = true;
      }
    }
    if (!drop) dom.push_back(kept[i]);
  }
  cs_ = std::move(dom);
  if (cs_.size() > kRedundancyThreshold) drop_entailed();
}

void Polyhedron::drop_entailed() {
  for (size_t i = 0; i < cs_.size();) {
    std::vector<LinearConstraint> rest;
    rest.reserve(cs_.size());
    for (size_t j = 0; j < cs_.size(); ++j)
      if (j != i) rest.push_back(cs_[j]);
    bool redundant = true;
    for (const auto& n : cs_[i].negation()) {
      std::vector<LinearConstraint> probe = rest;
      probe.push_back(n);
      std::vector<uint32_t> cols(dims_);
      for (uint32_t d = 0; d < dims_; ++d) cols[d] = d;
      if (fm_eliminate(probe, cols)) {
        redundant = false;
        break;
      }
    }
    if (redundant) cs_.erase(cs_.begin() + static_cast<long>(i));
    else ++i;
  }
}

Polyhedron Polyhedron::intersect(const Polyhedron& p, const Polyhedron& q) {
  if (p.dims_ != q.dims_) throw std::invalid_argument("universe mismatch");
  Polyhedron r = p;
  r.add(q);
  r.canonicalize();
  return r;
}

bool Polyhedron::is_empty() const {
  if (cs_.empty()) return false;
  if (syntactically_empty()) return true;
  std::vector<LinearConstraint> rows = cs_;
  std::vector<uint32_t> cols(dims_);
  for (uint32_t d = 0; d < dims_; ++d) cols[d] = d;
  return !fm_eliminate(rows, cols);
}

Polyhedron Polyhedron::eliminate_indices(std::vector<uint32_t> idx) const {
  std::vector<LinearConstraint> rows = cs_;
  Polyhedron out(dims_);
  if (!fm_eliminate(rows, std::move(idx))) return bottom(dims_);
  out.cs_ = std::move(rows);
  out.canonicalize();
  return out;
}

Polyhedron Polyhedron::eliminate(const std::vector<VarId>& vars) const {
  std::vector<uint32_t> idx;
  idx.reserve(vars.size());
  for (VarId v : vars) {
    if (v.index >= dims_) throw std::invalid_argument("variable outside universe");
    idx.push_back(v.index);
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return eliminate_indices(std::move(idx));
}

Polyhedron Polyhedron::time_elapse(const std::vector<uint32_t>& advancing) const {
  // widen every row by a delta column, substitute x -> x - delta for
  // advancing x, require delta >= 0, then project delta away
  const uint32_t wide = dims_ + 1;
  std::vector<LinearConstraint> rows;
  rows.reserve(cs_.size() + 1);
  for (const auto& c : cs_) {
    std::vector<Integer> cw(wide, Integer(0));
    Integer dcoef(0);
    for (uint32_t i = 0; i < dims_; ++i) cw[i] = c.coeff(i);
    for (uint32_t a : advancing) dcoef -= c.coeff(a);
    cw[dims_] = dcoef;
    rows.push_back(LinearConstraint(std::move(cw), c.constant(), c.rel()));
  }
  {
    std::vector<Integer> cw(wide, Integer(0));
    cw[dims_] = -1;  // -delta <= 0
    rows.push_back(LinearConstraint(std::move(cw), Integer(0), Rel::Le));
  }
  if (!fm_eliminate(rows, {dims_})) return bottom(dims_);
  Polyhedron out(dims_);
  for (const auto& r : rows) {
    std::vector<Integer> cs(dims_);
    for (uint32_t i = 0; i < dims_; ++i) cs[i] = r.coeff(i);
    out.cs_.push_back(LinearConstraint(std::move(cs), r.constant(), r.rel()));
  }
  out.canonicalize();
  return out;
}

Polyhedron Polyhedron::reset(const std::vector<VarId>& clocks) const {
  for (VarId v : clocks)
    if (v.kind != VarKind::Clock) throw std::invalid_argument("reset of non-clock");
  Polyhedron out = eliminate(clocks);
  if (out.syntactically_empty()) return out;
  for (VarId v : clocks) {
    LinExpr e;
    e.terms[v.index] = 1;
    out.add(LinearConstraint(dims_, e, Rel::Eq));
  }
  out.canonicalize();
  return out;
}

Polyhedron Polyhedron::project_to_params(const VarRegistry& reg) const {
  std::vector<uint32_t> idx;
  for (uint32_t i = 0; i < dims_; ++i)
    if (reg.kind(i) != VarKind::Parameter) idx.push_back(i);
  return eliminate_indices(std::move(idx));
}

bool Polyhedron::includes(const Polyhedron& q) const {
  if (q.dims_ != dims_) throw std::invalid_argument("universe mismatch");
  if (q.syntactically_empty()) return true;
  for (const auto& c : cs_) {
    for (const auto& n : c.negation()) {
      Polyhedron probe = q;
      probe.cs_.push_back(n);
      if (!probe.is_empty()) return false;
    }
  }
  return true;
}

Polyhedron Polyhedron::instantiate(
    const std::vector<std::pair<VarId, Rational>>& valuation) const {
  std::vector<std::pair<uint32_t, Rational>> vals;
  vals.reserve(valuation.size());
  for (const auto& [v, q] : valuation) {
    if (q < 0) throw std::domain_error("negative parameter valuation");
    vals.emplace_back(v.index, q);
  }
  Polyhedron out(dims_);
  for (const auto& c : cs_) out.cs_.push_back(c.substituted(vals));
  out.canonicalize();
  return out;
}

bool Polyhedron::contains_point(const std::vector<Rational>& point) const {
  for (const auto& c : cs_)
    if (!c.satisfied_by(point)) return false;
  return true;
}

bool Polyhedron::operator==(const Polyhedron& o) const {
  return dims_ == o.dims_ && cs_ == o.cs_;
}

bool Polyhedron::operator<(const Polyhedron& o) const {
  if (dims_ != o.dims_) return dims_ < o.dims_;
  return std::lexicographical_compare(cs_.begin(), cs_.end(), o.cs_.begin(), o.cs_.end());
}

size_t Polyhedron::hash() const {
  size_t h = 1469598103934665603ull;
  auto mix = [&h](size_t v) { h = (h ^ v) * 1099511628211ull; };
  for (const auto& c : cs_) {
    mix(static_cast<size_t>(c.rel()));
    mix(std::hash<std::string>{}(c.constant().get_str()));
    for (uint32_t i = 0; i < dims_; ++i)
      if (c.coeff(i) != 0) mix(i * 31 + std::hash<std::string>{}(c.coeff(i).get_str()));
  }
  return h;
}

std::string Polyhedron::text(const VarRegistry& reg) const {
  if (cs_.empty()) return "true";
  if (syntactically_empty()) return "false";
  std::string out;
  for (size_t i = 0; i < cs_.size(); ++i) {
    if (i) out += " AND ";
    const auto& c = cs_[i];
    // positive monomials and positive constant on the left of REL,
    // negated negative ones on the right: -d + 4 <= 0 renders "4 <= d"
    std::string lhs, rhs;
    auto append = [&reg](std::string& side, const Integer& coef, uint32_t var) {
      if (!side.empty()) side += " + ";
      if (coef != 1) side += coef.get_str() + "*";
      side += reg.name(var);
    };
    for (uint32_t v = 0; v < dims_; ++v) {
      if (c.coeff(v) > 0) append(lhs, c.coeff(v), v);
      else if (c.coeff(v) < 0) append(rhs, -c.coeff(v), v);
    }
    if (c.constant() > 0) {
      if (!lhs.empty()) lhs += " + ";
      lhs += c.constant().get_str();
    } else if (c.constant() < 0) {
      if (!rhs.empty()) rhs += " + ";
      rhs += (-c.constant()).get_str();
    }
    if (lhs.empty()) lhs = "0";
    if (rhs.empty()) rhs = "0";
    out += lhs + " " + rel_str(c.rel()) + " " + rhs;
  }
  return out;
}

}  // namespace psa
