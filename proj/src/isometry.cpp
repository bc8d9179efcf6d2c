#include "orthcert/isometry.hpp"

#include <array>
#include <optional>
#include <set>
#include <unordered_set>

#include "orthcert/errors.hpp"

namespace orthcert {

namespace {

using Key = std::vector<std::int64_t>;

std::vector<RingElem> all_elements(const RingDesc& R) {
  if (!R.is_finite()) throw DomainError("enumeration needs a finite base ring, got " + R.to_string());
  std::vector<RingElem> out;
  for (std::uint64_t i = 0; i < *R.size(); ++i) out.push_back(R.element_at(i));
  return out;
}

// q^n, or budget + 1 when that overflows the budget.
std::uint64_t capped_power(std::uint64_t q, std::size_t n, std::uint64_t cap) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (v > cap / q + 1) return cap + 1;
    v *= q;
  }
  return v;
}

// Calls f on every coordinate vector in row-major lexicographic order (first coordinate most
// significant).
template <class F>
void for_each_vector(const std::vector<RingElem>& elems, std::size_t n, F&& f) {
  std::vector<std::size_t> digits(n, 0);
  std::vector<RingElem> v(n, elems[0]);
  while (true) {
    f(v);
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++digits[pos] < elems.size()) {
        v[pos] = elems[digits[pos]];
        break;
      }
      digits[pos] = 0;
      v[pos] = elems[0];
      if (pos == 0) return;
    }
    if (n == 0) return;
  }
}

void require_split_finite(const AlgebraDesc& A, const char* what) {
  if (A.shape() != AlgShape::Split) throw DomainError(std::string(what) + " needs a split algebra");
  if (!A.base().is_finite()) throw DomainError(std::string(what) + " needs a finite base ring");
}

AlgElem alternating(const AlgebraDesc& A, const std::vector<RingElem>& upper) {
  const auto& R = A.base();
  const std::size_t d = A.degree();
  Matrix k = zeros(R, d, d);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      k(i, j) = upper[idx];
      k(j, i) = R.neg(upper[idx]);
      ++idx;
    }
  return mul(R, A.gram_inverse(), k);
}

RingElem half(const RingDesc& R) {
  const auto h = R.unit_inverse(R.from_int(2));
  if (!h) throw DomainError("2 is not invertible in " + R.to_string());
  return *h;
}

// The part of s_{y,a} after the inverse: shared by the single and enumerated paths.
AlgElem reflection_from_inverse(const AlgebraDesc& A, const AlgElem& y, const AlgElem& m_inv, const AlgElem& sy) {
  return A.sub(A.one(), A.mul(A.mul(y, m_inv), sy));
}


// Table-driven arithmetic for split algebras over small finite rings. Ring elements become
// their enumeration index (the element_at order), matrices fixed arrays of indices, and a
// matrix key is its row-major base-q number, so key order is enumeration order.
class Kernel {
 public:
  using Mat = std::array<std::uint16_t, 16>;
  static constexpr std::uint16_t kNone = 0xFFFF;

  static std::optional<Kernel> make(const AlgebraDesc& A) {
    if (A.shape() != AlgShape::Split || !A.base().is_finite()) return std::nullopt;
    const std::uint64_t q = *A.base().size();
    const std::size_t d = A.degree();
    if (q > 256 || d > 4) return std::nullopt;
    if (capped_power(q, d * d, std::uint64_t{1} << 62) > (std::uint64_t{1} << 62)) return std::nullopt;
    return Kernel(A);
  }

  std::size_t d() const { return d_; }
  std::uint64_t q() const { return q_; }

  std::uint16_t add(std::uint16_t a, std::uint16_t b) const { return add_[a * q_ + b]; }
  std::uint16_t mul(std::uint16_t a, std::uint16_t b) const { return mul_[a * q_ + b]; }
  std::uint16_t neg(std::uint16_t a) const { return neg_[a]; }

  Mat madd(const Mat& x, const Mat& y) const {
    Mat z{};
    for (std::size_t i = 0; i < n2_; ++i) z[i] = add(x[i], y[i]);
    return z;
  }
  Mat msub(const Mat& x, const Mat& y) const {
    Mat z{};
    for (std::size_t i = 0; i < n2_; ++i) z[i] = add(x[i], neg(y[i]));
    return z;
  }
  Mat mmul(const Mat& x, const Mat& y) const {
    Mat z{};
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) {
        std::uint16_t acc = 0;
        for (std::size_t k = 0; k < d_; ++k) acc = add(acc, mul(x[i * d_ + k], y[k * d_ + j]));
        z[i * d_ + j] = acc;
      }
    return z;
  }
  Mat scale(std::uint16_t c, const Mat& x) const {
    Mat z{};
    for (std::size_t i = 0; i < n2_; ++i) z[i] = mul(c, x[i]);
    return z;
  }
  Mat sigma(const Mat& x) const {
    Mat t{};
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) t[i * d_ + j] = x[j * d_ + i];
    return mmul(mmul(ginv_, t), g_);
  }
  const Mat& one() const { return one_; }
  const Mat& gram_inverse() const { return ginv_; }
  std::uint16_t half() const { return half_; }

  std::optional<Mat> inverse(const Mat& x) const {
    std::array<std::size_t, 4> all{0, 1, 2, 3};
    const std::uint16_t dinv = inv_[det(x, all, all, d_)];
    if (dinv == kNone) return std::nullopt;
    Mat z{};
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) {
        // adj(x)_{ij} = (-1)^{i+j} det(x without row j and column i).
        std::array<std::size_t, 4> rows{}, cols{};
        std::size_t r = 0, c = 0;
        for (std::size_t k = 0; k < d_; ++k) {
          if (k != j) rows[r++] = k;
          if (k != i) cols[c++] = k;
        }
        std::uint16_t m = d_ == 1 ? one_idx_ : det(x, rows, cols, d_ - 1);
        if ((i + j) % 2) m = neg(m);
        z[i * d_ + j] = mul(m, dinv);
      }
    return z;
  }

  std::uint64_t key(const Mat& x) const {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < n2_; ++i) k = k * q_ + x[i];
    return k;
  }
  Mat from_digits(const std::vector<std::uint16_t>& digits) const {
    Mat z{};
    for (std::size_t i = 0; i < n2_; ++i) z[i] = digits[i];
    return z;
  }
  AlgElem to_alg(const Mat& x) const {
    std::vector<RingElem> e;
    for (std::size_t i = 0; i < n2_; ++i) e.push_back(elems_[x[i]]);
    return Matrix(d_, d_, std::move(e));
  }
  std::uint16_t index_of(const RingElem& x) const {
    const auto& r = std::get<Residues>(x);
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < r.size(); ++i) idx = idx * radix_[i] + static_cast<std::uint64_t>(r[i]);
    return static_cast<std::uint16_t>(idx);
  }
  Mat from_alg(const AlgElem& x) const {
    Mat z{};
    for (std::size_t i = 0; i < n2_; ++i) z[i] = index_of(x.entries()[i]);
    return z;
  }

 private:
  explicit Kernel(const AlgebraDesc& A) : d_(A.degree()), n2_(A.degree() * A.degree()), q_(*A.base().size()) {
    const auto& R = A.base();
    for (const auto& atom : R.atoms())
      for (std::size_t i = 0; i < atom.width(); ++i) radix_.push_back(static_cast<std::uint64_t>(atom.n));
    for (std::uint64_t i = 0; i < q_; ++i) elems_.push_back(R.element_at(i));
    add_.resize(q_ * q_);
    mul_.resize(q_ * q_);
    for (std::uint64_t a = 0; a < q_; ++a)
      for (std::uint64_t b = 0; b < q_; ++b) {
        add_[a * q_ + b] = index_of(R.add(elems_[a], elems_[b]));
        mul_[a * q_ + b] = index_of(R.mul(elems_[a], elems_[b]));
      }
    for (std::uint64_t a = 0; a < q_; ++a) {
      neg_.push_back(index_of(R.neg(elems_[a])));
      const auto inv = R.unit_inverse(elems_[a]);
      inv_.push_back(inv ? index_of(*inv) : kNone);
    }
    one_idx_ = index_of(R.one());
    g_ = from_alg(A.gram());
    ginv_ = from_alg(A.gram_inverse());
    one_ = from_alg(A.one());
    half_ = inv_[index_of(R.from_int(2))];
  }

  // Laplace expansion along the first listed row.
  std::uint16_t det(const Mat& x, const std::array<std::size_t, 4>& rows, const std::array<std::size_t, 4>& cols,
                    std::size_t n) const {
    if (n == 1) return x[rows[0] * d_ + cols[0]];
    std::uint16_t acc = 0;
    for (std::size_t c = 0; c < n; ++c) {
      std::array<std::size_t, 4> sub_rows{}, sub_cols{};
      for (std::size_t k = 1; k < n; ++k) sub_rows[k - 1] = rows[k];
      std::size_t m = 0;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) sub_cols[m++] = cols[k];
      std::uint16_t term = mul(x[rows[0] * d_ + cols[c]], det(x, sub_rows, sub_cols, n - 1));
      acc = add(acc, c % 2 ? neg(term) : term);
    }
    return acc;
  }

  std::size_t d_, n2_;
  std::uint64_t q_;
  std::vector<std::uint64_t> radix_;
  std::vector<RingElem> elems_;
  std::vector<std::uint16_t> add_, mul_, neg_, inv_;
  std::uint16_t one_idx_ = 0, half_ = 0;
  Mat g_{}, ginv_{}, one_{};
};

// Calls f on every digit vector of length n over {0..q-1}, first digit most significant.
template <class F>
void for_each_digits(std::uint64_t q, std::size_t n, F&& f) {
  std::vector<std::uint16_t> digits(n, 0);
  while (true) {
    f(digits);
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++digits[pos] < q) break;
      digits[pos] = 0;
      if (pos == 0) return;
    }
    if (n == 0) return;
  }
}

std::vector<Kernel::Mat> kernel_antisymmetric(const Kernel& K) {
  const std::size_t d = K.d();
  std::vector<Kernel::Mat> out;
  for_each_digits(K.q(), d * (d - 1) / 2, [&](const std::vector<std::uint16_t>& upper) {
    Kernel::Mat k{};
    std::size_t idx = 0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        k[i * d + j] = upper[idx];
        k[j * d + i] = K.neg(upper[idx]);
        ++idx;
      }
    out.push_back(K.mmul(K.gram_inverse(), k));
  });
  return out;
}

}  // namespace

bool is_isometry(const AlgebraDesc& A, const AlgElem& u) { return A.mul(involution(A, u), u) == A.one(); }

NrdSign nrd_sign(const AlgebraDesc& A, const AlgElem& u) {
  if (!is_isometry(A, u)) throw InvalidParameter("nrd_sign: element is not an isometry");
  NrdSign s{reduced_norm(A, u), false};
  s.special = A.base().is_one(s.nrd);
  return s;
}

AlgElem reflection(const AlgebraDesc& A, const ReflectionDatum& datum) {
  A.check_member(datum.y);
  A.check_member(datum.a);
  if (involution(A, datum.a) != A.neg(datum.a)) throw InvalidParameter("reflection: a is not antisymmetric");
  const AlgElem sy = involution(A, datum.y);
  const AlgElem m = A.add(A.scale(half(A.base()), A.mul(sy, datum.y)), datum.a);
  const auto m_inv = A.inverse(m);
  if (!m_inv) throw InvalidParameter("reflection: 1/2 sigma(y) y + a is not invertible");
  AlgElem s = reflection_from_inverse(A, datum.y, *m_inv, sy);
  if (!is_isometry(A, s)) throw IdentityViolation("isometry", "s_{y,a} is not an isometry");
  return s;
}

AlgElem random_antisymmetric(const AlgebraDesc& A, std::mt19937_64& rng) {
  const auto& R = A.base();
  if (A.shape() == AlgShape::Quaternion) {
    // sigma(p) = p conj(p) p^-1 = conj(p) = -p for the pure pivot; Sym_-1 = F p.
    if (!R.is_zero(A.pivot()(0, 0))) throw DomainError("scalar pivot: involution is not orthogonal");
    return A.scale(R.random(rng), A.pivot());
  }
  const std::size_t d = A.degree();
  std::vector<RingElem> upper;
  for (std::size_t i = 0; i < d * (d - 1) / 2; ++i) upper.push_back(R.random(rng));
  return alternating(A, upper);
}

std::vector<AlgElem> enumerate_antisymmetric(const AlgebraDesc& A) {
  require_split_finite(A, "enumerate_antisymmetric");
  const std::size_t d = A.degree();
  std::vector<AlgElem> out;
  for_each_vector(all_elements(A.base()), d * (d - 1) / 2,
                  [&](const std::vector<RingElem>& v) { out.push_back(alternating(A, v)); });
  return out;
}

AlgElem random_special_orthogonal(const AlgebraDesc& A, std::mt19937_64& rng) {
  AlgElem w = A.one();
  for (int factor = 0; factor < 2; ++factor) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      const AlgElem a = random_antisymmetric(A, rng);
      const auto inv = A.inverse(A.add(A.one(), a));
      if (!inv) continue;
      w = A.mul(w, A.mul(A.sub(A.one(), a), *inv));
      break;
    }
  }
  return w;
}

std::vector<std::int64_t> elem_key(const AlgElem& x) {
  Key key;
  for (const auto& e : x.entries()) {
    const auto* r = std::get_if<Residues>(&e);
    if (!r) throw DomainError("elem_key needs a finite base ring");
    key.insert(key.end(), r->begin(), r->end());
  }
  return key;
}

namespace {

void check_pair_budget(const AlgebraDesc& A, const EnumBudget& budget) {
  const std::uint64_t q = *A.base().size();
  const std::size_t d = A.degree();
  const std::uint64_t ys = capped_power(q, d * d, budget.pairs);
  const std::uint64_t as = capped_power(q, d * (d - 1) / 2, budget.pairs);
  if (ys > budget.pairs || as > budget.pairs || ys * as > budget.pairs)
    throw BudgetExceeded("reflection_enumerate candidate pairs",
                         ys > budget.pairs || as > budget.pairs ? budget.pairs + 1 : ys * as, budget.pairs);
}

void check_candidate_budget(const AlgebraDesc& A, const EnumBudget& budget) {
  const std::size_t d = A.degree();
  const std::uint64_t total = capped_power(*A.base().size(), d * d, budget.pairs);
  if (total > budget.pairs) throw BudgetExceeded("enumerate_orthogonal candidates", total, budget.pairs);
}

struct KernelReflections {
  std::vector<Kernel::Mat> reflections;
  std::uint64_t pairs = 0, valid = 0;
};

KernelReflections kernel_reflections(const Kernel& K, const EnumBudget& budget) {
  const auto antisym = kernel_antisymmetric(K);
  KernelReflections out;
  std::unordered_set<std::uint64_t> seen;
  for_each_digits(K.q(), K.d() * K.d(), [&](const std::vector<std::uint16_t>& digits) {
    const Kernel::Mat y = K.from_digits(digits);
    const Kernel::Mat sy = K.sigma(y);
    const Kernel::Mat q0 = K.scale(K.half(), K.mmul(sy, y));
    for (const auto& a : antisym) {
      ++out.pairs;
      const auto m_inv = K.inverse(K.madd(q0, a));
      if (!m_inv) continue;
      ++out.valid;
      const Kernel::Mat s = K.msub(K.one(), K.mmul(K.mmul(y, *m_inv), sy));
      if (seen.insert(K.key(s)).second) {
        if (seen.size() > budget.elements)
          throw BudgetExceeded("reflection_enumerate distinct elements", seen.size(), budget.elements);
        out.reflections.push_back(s);
      }
    }
  });
  return out;
}

std::vector<Kernel::Mat> kernel_orthogonal(const Kernel& K) {
  std::vector<Kernel::Mat> out;
  for_each_digits(K.q(), K.d() * K.d(), [&](const std::vector<std::uint16_t>& digits) {
    const Kernel::Mat u = K.from_digits(digits);
    if (K.mmul(K.sigma(u), u) == K.one()) out.push_back(u);
  });
  return out;
}

std::optional<Kernel> kernel_for(const AlgebraDesc& A, const EnumBudget& budget) {
  return budget.use_tables ? Kernel::make(A) : std::nullopt;
}

}  // namespace

ReflectionSet reflection_enumerate(const AlgebraDesc& A, const EnumBudget& budget) {
  require_split_finite(A, "reflection_enumerate");
  check_pair_budget(A, budget);
  ReflectionSet out;
  if (const auto K = kernel_for(A, budget)) {
    const auto raw = kernel_reflections(*K, budget);
    for (const auto& s : raw.reflections) out.reflections.push_back(K->to_alg(s));
    out.pairs = raw.pairs;
    out.valid = raw.valid;
    return out;
  }
  const auto& R = A.base();
  const auto antisym = enumerate_antisymmetric(A);
  const RingElem h = half(R);
  std::set<Key> seen;
  for_each_vector(all_elements(R), A.dimension(), [&](const std::vector<RingElem>& coords) {
    const AlgElem y = A.from_coords(coords);
    const AlgElem sy = involution(A, y);
    const AlgElem q0 = A.scale(h, A.mul(sy, y));
    for (const auto& a : antisym) {
      ++out.pairs;
      const auto m_inv = A.inverse(A.add(q0, a));
      if (!m_inv) continue;
      ++out.valid;
      AlgElem s = reflection_from_inverse(A, y, *m_inv, sy);
      if (seen.insert(elem_key(s)).second) {
        if (seen.size() > budget.elements)
          throw BudgetExceeded("reflection_enumerate distinct elements", seen.size(), budget.elements);
        out.reflections.push_back(std::move(s));
      }
    }
  });
  return out;
}

std::vector<AlgElem> enumerate_orthogonal(const AlgebraDesc& A, const EnumBudget& budget) {
  require_split_finite(A, "enumerate_orthogonal");
  check_candidate_budget(A, budget);
  std::vector<AlgElem> out;
  if (const auto K = kernel_for(A, budget)) {
    for (const auto& u : kernel_orthogonal(*K)) out.push_back(K->to_alg(u));
    return out;
  }
  for_each_vector(all_elements(A.base()), A.dimension(), [&](const std::vector<RingElem>& coords) {
    AlgElem u = A.from_coords(coords);
    if (is_isometry(A, u)) out.push_back(std::move(u));
  });
  return out;
}

std::vector<AlgElem> enumerate_special_orthogonal(const AlgebraDesc& A, const EnumBudget& budget) {
  std::vector<AlgElem> out;
  for (auto& u : enumerate_orthogonal(A, budget))
    if (A.base().is_one(reduced_norm(A, u))) out.push_back(std::move(u));
  return out;
}

ClosureReport reflection_closure(const AlgebraDesc& A, const EnumBudget& budget) {
  require_split_finite(A, "reflection_closure");
  check_pair_budget(A, budget);
  check_candidate_budget(A, budget);
  ClosureReport report;
  // A finite monoid generated by invertible elements is a group, so right multiplication by
  // the generators from 1 reaches the whole subgroup.
  if (const auto K = kernel_for(A, budget)) {
    const auto gens = kernel_reflections(*K, budget).reflections;
    report.reflections = gens.size();
    std::vector<Kernel::Mat> group{K->one()};
    std::unordered_set<std::uint64_t> seen{K->key(K->one())};
    for (std::size_t head = 0; head < group.size(); ++head)
      for (const auto& s : gens) {
        const Kernel::Mat next = K->mmul(group[head], s);
        if (seen.insert(K->key(next)).second) {
          if (seen.size() > budget.elements)
            throw BudgetExceeded("reflection_closure elements", seen.size(), budget.elements);
          group.push_back(next);
        }
      }
    for (const auto& g : group) report.group.push_back(K->to_alg(g));
    for (const auto& u : kernel_orthogonal(*K)) {
      ++report.orthogonal;
      if (!A.base().is_one(reduced_norm(A, K->to_alg(u)))) continue;
      ++report.special;
      if (!seen.count(K->key(u))) ++report.missing;
    }
    report.contains_so = report.missing == 0;
    return report;
  }
  const auto gens = reflection_enumerate(A, budget).reflections;
  report.reflections = gens.size();
  std::set<Key> seen{elem_key(A.one())};
  report.group.push_back(A.one());
  for (std::size_t head = 0; head < report.group.size(); ++head) {
    for (const auto& s : gens) {
      AlgElem next = A.mul(report.group[head], s);
      if (seen.insert(elem_key(next)).second) {
        if (seen.size() > budget.elements) throw BudgetExceeded("reflection_closure elements", seen.size(), budget.elements);
        report.group.push_back(std::move(next));
      }
    }
  }
  const auto o = enumerate_orthogonal(A, budget);
  report.orthogonal = o.size();
  for (const auto& u : o) {
    if (!A.base().is_one(reduced_norm(A, u))) continue;
    ++report.special;
    if (!seen.count(elem_key(u))) ++report.missing;
  }
  report.contains_so = report.missing == 0;
  return report;
}

ReflectionDatum lift_reflection(const QuotientCtx& ctx, const std::vector<ReflectionDatum>& residue_data) {
  if (residue_data.size() != ctx.count()) throw InvalidParameter("lift_reflection: need one datum per residue");
  std::vector<AlgElem> ys, as, targets;
  for (std::size_t i = 0; i < ctx.count(); ++i) {
    targets.push_back(reflection(ctx.residues()[i], residue_data[i]));
    ys.push_back(residue_data[i].y);
    as.push_back(residue_data[i].a);
  }
  const auto& A = ctx.source();
  const AlgElem z = ctx.lift(ys);
  const AlgElem b0 = ctx.lift(as);
  const AlgElem b = A.scale(half(A.base()), A.sub(b0, involution(A, b0)));
  ReflectionDatum lifted{z, b};
  const AlgElem s = reflection(A, lifted);
  for (std::size_t i = 0; i < ctx.count(); ++i)
    if (ctx.reduce(i, s) != targets[i])
      throw IdentityViolation("reflection reduces", "lifted reflection differs at " + ctx.split().ideals()[i].label);
  return lifted;
}

AlgElem hensel_lift_isometry(const AlgebraDesc& A, const AlgElem& u0) {
  A.check_member(u0);
  const auto& R = A.base();
  const AlgElem eps = A.sub(A.mul(involution(A, u0), u0), A.one());
  if (!R.is_finite()) {
    if (!is_zero(R, eps)) throw InvalidParameter("hensel_lift_isometry: infinite base needs an exact isometry");
    return u0;
  }
  if (!residually_zero(A, eps)) throw InvalidParameter("hensel_lift_isometry: sigma(u0) u0 - 1 is not residually zero");
  const auto split = residue_split(R);
  const RingElem n0 = reduced_norm(A, u0);
  int sign = 0;
  for (std::size_t i = 0; i < split.count(); ++i) {
    const int s = split.residue_fields()[i].is_one(split.project(i, n0)) ? 1 : -1;
    if (sign != 0 && s != sign) throw InvalidParameter("hensel_lift_isometry: residue signs of Nrd disagree");
    sign = s;
  }
  const AlgElem s = sqrt_one_plus_nilpotent(A, eps);
  const auto s_inv = A.inverse(s);
  if (!s_inv) throw IdentityViolation("s invertible", "square root of 1 + eps is not a unit");
  AlgElem u = A.mul(u0, *s_inv);
  if (!is_isometry(A, u)) throw IdentityViolation("isometry", "Hensel lift is not an isometry");
  const RingElem expected = sign > 0 ? R.one() : R.neg(R.one());
  if (reduced_norm(A, u) != expected) throw IdentityViolation("sign pinning", "Nrd of the lift is not the residue sign");
  return u;
}

LiftCertificate lift_so(const AlgebraDesc& A, const std::vector<AlgElem>& targets) {
  const QuotientCtx ctx = quotient_ctx(A);
  if (targets.size() != ctx.count())
    throw InvalidParameter("lift_so: expected " + std::to_string(ctx.count()) + " targets, got " +
                           std::to_string(targets.size()));
  for (std::size_t i = 0; i < ctx.count(); ++i) {
    const auto& Ai = ctx.residues()[i];
    Ai.check_member(targets[i]);
    if (!is_isometry(Ai, targets[i]) || !Ai.base().is_one(reduced_norm(Ai, targets[i])))
      throw InvalidParameter("lift_so: target at " + ctx.split().ideals()[i].label + " is not in SO");
  }
  LiftCertificate cert;
  cert.targets = targets;
  cert.lifted = hensel_lift_isometry(A, ctx.lift(targets));
  cert.checks.isometry = is_isometry(A, cert.lifted);
  cert.checks.nrd_one = A.base().is_one(reduced_norm(A, cert.lifted));
  cert.checks.residues = ctx.reduce_all(cert.lifted) == targets;
  if (!cert.checks.isometry || !cert.checks.nrd_one || !cert.checks.residues)
    throw IdentityViolation("lift_so", "internal failure: lifted element does not satisfy its checks");
  return cert;
}

void verify_lift(const AlgebraDesc& A, const LiftCertificate& cert) {
  const QuotientCtx ctx = quotient_ctx(A);
  if (cert.targets.size() != ctx.count()) throw IdentityViolation("targets", "wrong number of residue targets");
  for (std::size_t i = 0; i < ctx.count(); ++i) {
    const auto& Ai = ctx.residues()[i];
    Ai.check_member(cert.targets[i]);
    if (!is_isometry(Ai, cert.targets[i]) || !Ai.base().is_one(reduced_norm(Ai, cert.targets[i])))
      throw IdentityViolation("targets", "target at " + ctx.split().ideals()[i].label + " is not in SO");
  }
  A.check_member(cert.lifted);
  if (!is_isometry(A, cert.lifted)) throw IdentityViolation("isometry", "sigma(w) w != 1");
  if (!A.base().is_one(reduced_norm(A, cert.lifted))) throw IdentityViolation("nrd_one", "Nrd(w) != 1");
  for (std::size_t i = 0; i < ctx.count(); ++i)
    if (ctx.reduce(i, cert.lifted) != cert.targets[i])
      throw IdentityViolation("residues", "w does not reduce to the target at " + ctx.split().ideals()[i].label);
}

}  // namespace orthcert
