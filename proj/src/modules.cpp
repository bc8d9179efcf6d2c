#include "orthcert/modules.hpp"

#include <array>
#include <utility>

#include "orthcert/errors.hpp"

namespace orthcert {

namespace {

using IntRow = std::vector<std::int64_t>;

// Unit u with u * a = gcd(a, n) (mod n).
std::int64_t normalizer_mod(std::int64_t a, std::int64_t n) {
  if (a == 0) return 1;
  const std::int64_t g = gcd_i64(a, n);
  const std::int64_t m = n / g;
  std::int64_t s, t;
  ext_gcd((a / g) % m, m, s, t);
  std::int64_t u = m == 1 ? 1 : mod_floor(s, m);
  while (gcd_i64(u, n) != 1) u += m;
  return u % n;
}

// q with a * q = b (mod n), if a divides b.
std::optional<std::int64_t> divide_mod(std::int64_t a, std::int64_t b, std::int64_t n) {
  const std::int64_t g = gcd_i64(a, n);
  if (b % g != 0) return std::nullopt;
  const std::int64_t m = n / g;
  if (m == 1) return 0;
  std::int64_t s, t;
  ext_gcd((a / g) % m, m, s, t);
  return mul_mod((b / g) % m, mod_floor(s, m), m);
}

// [s t; u v] with determinant 1 sending (a, b) to (g, 0).
std::array<std::int64_t, 4> bezout_mod(std::int64_t a, std::int64_t b, std::int64_t n) {
  if (a != 0) {
    if (auto q = divide_mod(a, b, n)) return {1, 0, mod_floor(-*q, n), 1};
  }
  std::int64_t s, t;
  const std::int64_t g = ext_gcd(a, b, s, t);
  return {mod_floor(s, n), mod_floor(t, n), mod_floor(-(b / g), n), mod_floor(a / g, n)};
}

/// Principal-ideal-ring operations on a single atom, on canonical RingElem values.
class Pir {
 public:
  explicit Pir(const RingAtom& atom) : ring_(RingDesc::atom_ring(atom)), field_(atom.is_field), n_(atom.n) {}

  const RingDesc& ring() const { return ring_; }

  std::array<RingElem, 4> bezout(const RingElem& a, const RingElem& b) const {
    if (!field_) {
      const auto c = bezout_mod(rep(a), rep(b), n_);
      return {scalar(c[0]), scalar(c[1]), scalar(c[2]), scalar(c[3])};
    }
    if (!ring_.is_zero(a)) {
      const RingElem q = ring_.mul(b, *ring_.unit_inverse(a));
      return {ring_.one(), ring_.zero(), ring_.neg(q), ring_.one()};
    }
    if (!ring_.is_zero(b)) return {ring_.zero(), ring_.one(), ring_.from_int(-1), ring_.zero()};
    return {ring_.one(), ring_.zero(), ring_.zero(), ring_.one()};
  }

  bool divides(const RingElem& a, const RingElem& b) const {
    if (field_) return !ring_.is_zero(a) || ring_.is_zero(b);
    return divide_mod(rep(a), rep(b), n_).has_value();
  }

  RingElem normalizer(const RingElem& a) const {
    if (field_) return ring_.is_zero(a) ? ring_.one() : *ring_.unit_inverse(a);
    return scalar(normalizer_mod(rep(a), n_));
  }

  bool is_unit(const RingElem& a) const { return ring_.unit_inverse(a).has_value(); }

 private:
  static std::int64_t rep(const RingElem& x) { return std::get<Residues>(x)[0]; }
  RingElem scalar(std::int64_t v) const { return Residues{v}; }

  RingDesc ring_;
  bool field_;
  std::int64_t n_;
};

using ElemMatrix = std::vector<Vec>;

void row_op(const RingDesc& A, ElemMatrix& m, std::size_t p, std::size_t q, const std::array<RingElem, 4>& c) {
  for (std::size_t j = 0; j < m[p].size(); ++j) {
    const RingElem x = m[p][j], y = m[q][j];
    m[p][j] = A.add(A.mul(c[0], x), A.mul(c[1], y));
    m[q][j] = A.add(A.mul(c[2], x), A.mul(c[3], y));
  }
}

void col_op(const RingDesc& A, ElemMatrix& m, std::size_t p, std::size_t q, const std::array<RingElem, 4>& c) {
  for (auto& row : m) {
    const RingElem x = row[p], y = row[q];
    row[p] = A.add(A.mul(c[0], x), A.mul(c[1], y));
    row[q] = A.add(A.mul(c[2], x), A.mul(c[3], y));
  }
}

/// Smith-type diagonalisation on one atom, tracking the column transform and its inverse.
class AtomSmith {
 public:
  AtomSmith(const Pir& pir, ElemMatrix g, std::size_t cols) : pir_(pir), g_(std::move(g)), cols_(cols) {
    const RingDesc& A = pir_.ring();
    v_.assign(cols, Vec(cols, A.zero()));
    vinv_ = v_;
    for (std::size_t i = 0; i < cols; ++i) v_[i][i] = vinv_[i][i] = A.one();
  }

  AtomModule run() {
    const RingDesc& A = pir_.ring();
    const std::size_t diag = std::min(g_.size(), cols_);
    diagonalise(0);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t t = 0; t < diag; ++t) {
        const RingElem u = pir_.normalizer(g_[t][t]);
        if (!A.is_one(u)) column_scale(t, u);
      }
      for (std::size_t i = 0; i < diag && !changed; ++i) {
        if (A.is_zero(g_[i][i])) continue;
        for (std::size_t j = i + 1; j < diag; ++j) {
          if (pir_.divides(g_[i][i], g_[j][j])) continue;
          column_apply(i, j, {A.one(), A.one(), A.zero(), A.one()});
          diagonalise(i);
          changed = true;
          break;
        }
      }
    }
    AtomModule out;
    for (std::size_t t = 0; t < cols_; ++t) {
      const RingElem d = t < diag ? g_[t][t] : A.zero();
      if (A.kind() == RingKind::FiniteField)
        out.invariants.push_back(A.is_zero(d) ? 0 : 1);
      else
        out.invariants.push_back(std::get<Residues>(d)[0]);
    }
    out.column_transform = to_matrix(v_);
    out.column_transform_inv = to_matrix(vinv_);
    return out;
  }

 private:
  Matrix to_matrix(const ElemMatrix& m) const {
    std::vector<RingElem> e;
    for (const auto& row : m) e.insert(e.end(), row.begin(), row.end());
    return Matrix(cols_, cols_, std::move(e));
  }

  void column_apply(std::size_t p, std::size_t q, const std::array<RingElem, 4>& c) {
    const RingDesc& A = pir_.ring();
    col_op(A, g_, p, q, c);
    col_op(A, v_, p, q, c);
    // V^-1 <- E^-1 V^-1, E^-1 on rows (p, q) is [[v, -u], [-t, s]].
    row_op(A, vinv_, p, q, {c[3], A.neg(c[2]), A.neg(c[1]), c[0]});
  }

  void column_swap(std::size_t p, std::size_t q) {
    if (p == q) return;
    for (auto& row : g_) std::swap(row[p], row[q]);
    for (auto& row : v_) std::swap(row[p], row[q]);
    std::swap(vinv_[p], vinv_[q]);
  }

  void column_scale(std::size_t p, const RingElem& u) {
    const RingDesc& A = pir_.ring();
    const RingElem uinv = *A.unit_inverse(u);
    for (auto& row : g_) row[p] = A.mul(row[p], u);
    for (auto& row : v_) row[p] = A.mul(row[p], u);
    for (auto& x : vinv_[p]) x = A.mul(x, uinv);
  }

  void diagonalise(std::size_t start) {
    const RingDesc& A = pir_.ring();
    const std::size_t rows = g_.size();
    for (std::size_t t = start; t < std::min(rows, cols_); ++t) {
      bool found = false;
      for (std::size_t i = t; i < rows && !found; ++i)
        for (std::size_t j = t; j < cols_ && !found; ++j)
          if (!A.is_zero(g_[i][j])) {
            std::swap(g_[t], g_[i]);
            column_swap(t, j);
            found = true;
          }
      if (!found) return;
      for (bool dirty = true; dirty;) {
        dirty = false;
        for (std::size_t i = t + 1; i < rows; ++i)
          if (!A.is_zero(g_[i][t])) row_op(A, g_, t, i, pir_.bezout(g_[t][t], g_[i][t]));
        for (std::size_t j = t + 1; j < cols_; ++j)
          if (!A.is_zero(g_[t][j])) column_apply(t, j, pir_.bezout(g_[t][t], g_[t][j]));
        for (std::size_t i = t + 1; i < rows; ++i)
          if (!A.is_zero(g_[i][t])) dirty = true;
      }
    }
  }

  const Pir& pir_;
  ElemMatrix g_;
  std::size_t cols_;
  ElemMatrix v_, vinv_;
};

ElemMatrix atom_rows(const RingDesc& R, const std::vector<Vec>& generators, std::size_t atom, std::size_t length) {
  ElemMatrix rows;
  for (const auto& g : generators) {
    if (g.size() != length) throw InvalidParameter("generator length mismatch");
    Vec row;
    for (const auto& x : g) row.push_back(R.project_atom(x, atom));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<IntRow> rref_flat(const RingDesc& F, ElemMatrix m, std::size_t cols) {
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t col = 0; col < cols && rank < m.size(); ++col) {
    std::size_t p = rank;
    while (p < m.size() && F.is_zero(m[p][col])) ++p;
    if (p == m.size()) continue;
    std::swap(m[rank], m[p]);
    const RingElem inv = *F.unit_inverse(m[rank][col]);
    for (auto& x : m[rank]) x = F.mul(x, inv);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == rank || F.is_zero(m[i][col])) continue;
      const RingElem f = m[i][col];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] = F.sub(m[i][j], F.mul(f, m[rank][j]));
    }
    ++rank;
  }
  std::vector<IntRow> out;
  for (std::size_t i = 0; i < rank; ++i) {
    IntRow flat;
    for (const auto& x : m[i]) {
      const auto& r = std::get<Residues>(x);
      flat.insert(flat.end(), r.begin(), r.end());
    }
    out.push_back(std::move(flat));
  }
  return out;
}

}  // namespace

std::vector<std::vector<std::int64_t>> howell_form(std::int64_t n, std::vector<std::vector<std::int64_t>> a,
                                                   std::size_t cols) {
  for (auto& row : a) {
    if (row.size() != cols) throw InvalidParameter("howell_form: row length mismatch");
    for (auto& x : row) x = mod_floor(x, n);
  }
  auto combine = [&](std::size_t p, std::size_t q, const std::array<std::int64_t, 4>& c) {
    for (std::size_t j = 0; j < cols; ++j) {
      const std::int64_t x = a[p][j], y = a[q][j];
      a[p][j] = (mul_mod(c[0], x, n) + mul_mod(c[1], y, n)) % n;
      a[q][j] = (mul_mod(c[2], x, n) + mul_mod(c[3], y, n)) % n;
    }
  };
  std::size_t r = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t col = 0; col < cols; ++col) {
    std::size_t i = r;
    while (i < a.size() && a[i][col] == 0) ++i;
    if (i == a.size()) continue;
    std::swap(a[r], a[i]);
    for (std::size_t k = r + 1; k < a.size(); ++k)
      if (a[k][col] != 0) combine(r, k, bezout_mod(a[r][col], a[k][col], n));
    const std::int64_t u = normalizer_mod(a[r][col], n);
    for (auto& x : a[r]) x = mul_mod(x, u, n);
    const std::int64_t g = a[r][col];
    IntRow ann(cols);
    bool nonzero = false;
    for (std::size_t j = 0; j < cols; ++j) {
      ann[j] = mul_mod(n / g, a[r][j], n);
      nonzero = nonzero || ann[j] != 0;
    }
    if (nonzero) a.push_back(std::move(ann));
    pivots.push_back(col);
    ++r;
  }
  for (std::size_t k = 0; k < r; ++k) {
    const std::size_t c = pivots[k];
    const std::int64_t g = a[k][c];
    for (std::size_t i = 0; i < k; ++i) {
      const std::int64_t q = a[i][c] / g;
      if (q == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) a[i][j] = mod_floor(a[i][j] - mul_mod(q, a[k][j], n), n);
    }
  }
  a.resize(r);
  return a;
}

SpanForm span_form(const RingDesc& R, const std::vector<Vec>& generators, std::size_t length) {
  if (!R.is_finite()) throw DomainError("span_form needs a finite ring");
  SpanForm out;
  for (std::size_t a = 0; a < R.atoms().size(); ++a) {
    const auto& atom = R.atoms()[a];
    ElemMatrix rows = atom_rows(R, generators, a, length);
    if (atom.is_field) {
      out.per_atom.push_back(rref_flat(RingDesc::atom_ring(atom), std::move(rows), length));
      continue;
    }
    std::vector<IntRow> ints;
    for (const auto& row : rows) {
      IntRow r;
      for (const auto& x : row) r.push_back(std::get<Residues>(x)[0]);
      ints.push_back(std::move(r));
    }
    out.per_atom.push_back(howell_form(atom.n, std::move(ints), length));
  }
  return out;
}

ModuleBasis module_basis(const RingDesc& R, const std::vector<Vec>& generators, std::size_t length) {
  if (!R.is_finite()) throw DomainError("module_basis needs a modular, GF or finite product ring");
  ModuleBasis out;
  out.length = length;
  out.free = true;
  std::vector<std::vector<Vec>> atom_bases;
  std::optional<std::size_t> common_rank;
  for (std::size_t a = 0; a < R.atoms().size(); ++a) {
    const Pir pir(R.atoms()[a]);
    AtomModule am = AtomSmith(pir, atom_rows(R, generators, a, length), length).run();
    std::vector<Vec> basis;
    for (std::size_t i = 0; i < length; ++i) {
      const RingElem d = pir.ring().from_int(am.invariants[i]);
      if (am.invariants[i] == 0) continue;
      if (!pir.is_unit(d)) {
        out.free = false;
        out.reason = "torsion: invariant factor " + std::to_string(am.invariants[i]) + " in " +
                     pir.ring().to_string();
        continue;
      }
      Vec b;
      for (std::size_t j = 0; j < length; ++j) b.push_back(am.column_transform_inv(i, j));
      basis.push_back(std::move(b));
    }
    if (common_rank && *common_rank != basis.size() && out.free) {
      out.free = false;
      out.reason = "projective of non-constant rank";
    }
    common_rank = common_rank.value_or(basis.size());
    atom_bases.push_back(std::move(basis));
    out.atoms.push_back(std::move(am));
  }
  if (!out.free) return out;
  out.rank = common_rank.value_or(0);
  for (std::size_t k = 0; k < out.rank; ++k) {
    Vec v;
    for (std::size_t j = 0; j < length; ++j) {
      std::vector<Residues> parts;
      for (const auto& basis : atom_bases) parts.push_back(std::get<Residues>(basis[k][j]));
      v.push_back(R.embed_atoms(parts));
    }
    out.basis.push_back(std::move(v));
  }
  return out;
}

std::optional<Vec> coordinates(const RingDesc& R, const ModuleBasis& module, const Vec& v) {
  if (!module.free) throw DomainError("coordinates need a free module");
  if (v.size() != module.length) throw InvalidParameter("vector length mismatch");
  std::vector<std::vector<Residues>> per_atom(module.rank);
  for (std::size_t a = 0; a < R.atoms().size(); ++a) {
    const RingDesc A = RingDesc::atom_ring(R.atoms()[a]);
    const AtomModule& am = module.atoms[a];
    std::size_t k = 0;
    for (std::size_t i = 0; i < module.length; ++i) {
      RingElem w = A.zero();
      for (std::size_t j = 0; j < module.length; ++j)
        w = A.add(w, A.mul(R.project_atom(v[j], a), am.column_transform(j, i)));
      if (am.invariants[i] == 0) {
        if (!A.is_zero(w)) return std::nullopt;
        continue;
      }
      per_atom[k++].push_back(std::get<Residues>(w));
    }
  }
  Vec out;
  for (const auto& parts : per_atom) out.push_back(R.embed_atoms(parts));
  return out;
}

}  // namespace orthcert
