#include "orthcert/ideals.hpp"

#include <map>
#include <utility>

#include "orthcert/errors.hpp"

namespace orthcert {

namespace {

void require_supported_order(const RingDesc& order) {
  if (order.kind() != RingKind::QuadOrder) throw InvalidParameter("ideals need a quadratic order, got " + order.to_string());
  const auto r = ((order.quad_d() % 4) + 4) % 4;
  if (r != 2 && r != 3)
    throw InvalidParameter(order.to_string() + " is not the maximal order (need d = 2, 3 mod 4)");
}

mpz_class lcm_den(const std::vector<QuadNumber>& gens) {
  mpz_class den = 1;
  for (const auto& g : gens) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), g.re.get_den_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), g.im.get_den_mpz_t());
  }
  return den;
}

mpz_class gcd(const mpz_class& x, const mpz_class& y) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return g;
}

mpz_class floor_mod(const mpz_class& x, const mpz_class& n) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
  return r;
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

// Polynomials in the commuting indeterminates a, b, c, d with integer coefficients.
using Mono = std::array<int, 4>;
using SymPoly = std::map<Mono, long>;

SymPoly sym_var(int i) {
  Mono m{};
  m[i] = 1;
  return {{m, 1}};
}
SymPoly sym_const(long c) { return c ? SymPoly{{Mono{}, c}} : SymPoly{}; }

SymPoly sym_add(SymPoly x, const SymPoly& y, long sign = 1) {
  for (const auto& [m, c] : y)
    if ((x[m] += sign * c) == 0) x.erase(m);
  return x;
}
SymPoly sym_sub(const SymPoly& x, const SymPoly& y) { return sym_add(x, y, -1); }
SymPoly sym_mul(const SymPoly& x, const SymPoly& y) {
  SymPoly out;
  for (const auto& [mx, cx] : x)
    for (const auto& [my, cy] : y) {
      Mono m;
      for (int i = 0; i < 4; ++i) m[i] = mx[i] + my[i];
      if ((out[m] += cx * cy) == 0) out.erase(m);
    }
  return out;
}

std::string sym_str(const SymPoly& p) {
  if (p.empty()) return "0";
  static const char* names = "abcd";
  std::string out;
  // Highest total degree first.
  std::vector<std::pair<Mono, long>> terms(p.begin(), p.end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) {
    return x.first[0] + x.first[1] + x.first[2] + x.first[3] > y.first[0] + y.first[1] + y.first[2] + y.first[3];
  });
  for (const auto& [m, c] : terms) {
    const bool constant = m == Mono{};
    std::string term;
    if (c < 0) term += out.empty() ? "-" : " - ";
    else if (!out.empty()) term += " + ";
    const long mag = c < 0 ? -c : c;
    bool need_star = false;
    if (mag != 1 || constant) {
      term += std::to_string(mag);
      need_star = true;
    }
    for (int i = 0; i < 4; ++i)
      for (int e = 0; e < m[i]; ++e) {
        if (need_star) term += "*";
        term += names[i];
        need_star = true;
      }
    out += term;
  }
  return out;
}

using SymMat = std::array<std::array<SymPoly, 2>, 2>;

SymMat sym_matmul(const SymMat& x, const SymMat& y) {
  SymMat z;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) z[i][j] = sym_add(sym_mul(x[i][0], y[0][j]), sym_mul(x[i][1], y[1][j]));
  return z;
}

std::vector<StructuralIdentity> structural_identities() {
  const SymPoly a = sym_var(0), b = sym_var(1), c = sym_var(2), d = sym_var(3);
  const SymMat u{{{a, b}, {c, d}}};
  const SymMat su{{{d, b}, {c, a}}};
  const SymMat p = sym_matmul(su, u);
  const SymPoly det = sym_sub(sym_mul(a, d), sym_mul(b, c));
  // Defining equations, each equal to 0: sigma(u) u - 1 entrywise and det u + 1.
  const SymPoly e00 = sym_sub(p[0][0], sym_const(1)), e01 = p[0][1], e10 = p[1][0];
  const SymPoly dd = sym_add(det, sym_const(1));
  const SymPoly two = sym_const(2);

  struct Spec {
    std::string name;
    SymPoly lhs;
    std::string combination;
    SymPoly value;
  };
  const std::vector<Spec> specs{
      {"2ad=0", sym_mul(two, sym_mul(a, d)), "(sigma(u)u - 1)[0][0] + (det u + 1)", sym_add(e00, dd)},
      {"bc=1", sym_sub(sym_mul(two, sym_mul(b, c)), two), "(sigma(u)u - 1)[0][0] - (det u + 1)", sym_sub(e00, dd)},
      {"2ac=0", sym_mul(two, sym_mul(a, c)), "(sigma(u)u)[1][0]", e10},
      {"2bd=0", sym_mul(two, sym_mul(b, d)), "(sigma(u)u)[0][1]", e01},
  };
  std::vector<StructuralIdentity> out;
  for (const auto& s : specs) out.push_back({s.name, sym_str(s.lhs), s.combination, s.lhs == s.value});
  return out;
}

bool is_integral(const QuadNumber& x) { return x.re.get_den() == 1 && x.im.get_den() == 1; }

QuadNumber random_in(const QuadIdeal& I, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> coef(-3, 3);
  const auto basis = I.z_basis();
  const mpq_class s(coef(rng)), t(coef(rng));
  return QuadNumber{s * basis[0].re + t * basis[1].re, s * basis[0].im + t * basis[1].im};
}

}  // namespace

QuadIdeal QuadIdeal::from_generators(const RingDesc& order, const std::vector<QuadNumber>& gens) {
  require_supported_order(order);
  const mpz_class d(static_cast<long>(order.quad_d()));
  const mpz_class den = lcm_den(gens);
  // Rows (X, Y) for X + Y w: every generator and w times it, scaled to integers.
  std::vector<std::pair<mpz_class, mpz_class>> rows;
  for (const auto& g : gens) {
    const mpq_class X = g.re * den, Y = g.im * den;
    rows.emplace_back(X.get_num(), Y.get_num());
    rows.emplace_back(d * Y.get_num(), X.get_num());
  }
  // Euclid on the w-coordinate leaves one pivot row; the rest span the rational part.
  while (true) {
    std::size_t pivot = rows.size();
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].second == 0) continue;
      ++nonzero;
      if (pivot == rows.size() || abs(rows[i].second) < abs(rows[pivot].second)) pivot = i;
    }
    if (nonzero <= 1) break;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == pivot || rows[i].second == 0) continue;
      mpz_class q;
      mpz_tdiv_q(q.get_mpz_t(), rows[i].second.get_mpz_t(), rows[pivot].second.get_mpz_t());
      rows[i].first -= q * rows[pivot].first;
      rows[i].second -= q * rows[pivot].second;
    }
  }
  mpz_class a = 0, b = 0, c = 0;
  for (const auto& [x, y] : rows) {
    if (y != 0) {
      c = y;
      b = x;
    } else {
      a = gcd(a, x);
    }
  }
  if (a == 0 || c == 0) throw InvalidParameter("the zero ideal is not invertible");
  if (c < 0) {
    c = -c;
    b = -b;
  }
  b = floor_mod(b, a);
  const mpz_class g = gcd(gcd(a, b), gcd(c, den));
  QuadIdeal I(order);
  I.a_ = a / g;
  I.b_ = b / g;
  I.c_ = c / g;
  I.den_ = den / g;
  I.gens_ = gens;
  return I;
}

QuadIdeal QuadIdeal::unit(const RingDesc& order) { return from_generators(order, {QuadNumber{1, 0}}); }

std::array<QuadNumber, 2> QuadIdeal::z_basis() const {
  const mpq_class den(den_);
  return {QuadNumber{mpq_class(a_) / den, 0}, QuadNumber{mpq_class(b_) / den, mpq_class(c_) / den}};
}

mpq_class QuadIdeal::norm() const {
  mpq_class n(a_ * c_, den_ * den_);
  n.canonicalize();
  return n;
}

bool QuadIdeal::contains(const QuadNumber& x) const {
  const mpq_class X = x.re * den_, Y = x.im * den_;
  if (X.get_den() != 1 || Y.get_den() != 1) return false;
  if (floor_mod(Y.get_num(), c_) != 0) return false;
  const mpz_class v = Y.get_num() / c_;
  return floor_mod(X.get_num() - v * b_, a_) == 0;
}

QuadIdeal ideal_product(const QuadIdeal& I, const QuadIdeal& J) {
  if (!(I.order() == J.order())) throw InvalidParameter("ideals over different orders");
  const auto& R = I.order();
  std::vector<QuadNumber> gens;
  for (const auto& x : I.z_basis())
    for (const auto& y : J.z_basis()) gens.push_back(std::get<QuadNumber>(R.mul(x, y)));
  const auto P = QuadIdeal::from_generators(R, gens);
  const auto basis = P.z_basis();
  return QuadIdeal::from_generators(R, {basis[0], basis[1]});
}

QuadIdeal ideal_conjugate(const QuadIdeal& I) {
  std::vector<QuadNumber> gens;
  for (const auto& x : I.z_basis()) gens.push_back(QuadNumber{x.re, -x.im});
  const auto C = QuadIdeal::from_generators(I.order(), gens);
  const auto basis = C.z_basis();
  return QuadIdeal::from_generators(I.order(), {basis[0], basis[1]});
}

QuadIdeal ideal_inverse(const QuadIdeal& I) {
  const mpq_class n = I.norm();
  std::vector<QuadNumber> gens;
  for (const auto& x : ideal_conjugate(I).z_basis()) gens.push_back(QuadNumber{x.re / n, x.im / n});
  const auto J = QuadIdeal::from_generators(I.order(), gens);
  if (!(ideal_product(I, J) == QuadIdeal::unit(I.order())))
    throw InvalidParameter("ideal " + format_ideal(I) + " is not invertible");
  const auto basis = J.z_basis();
  return QuadIdeal::from_generators(I.order(), {basis[0], basis[1]});
}

QuadIdeal parse_ideal(const RingDesc& order, const std::string& gens) {
  require_supported_order(order);
  std::vector<QuadNumber> out;
  std::string current;
  int depth = 0;
  auto flush = [&] {
    const std::string token = strip(current);
    if (token.empty()) throw ParseError("empty ideal generator", gens);
    out.push_back(std::get<QuadNumber>(order.parse_elem(token)));
    current.clear();
  };
  for (char ch : gens) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0)
      flush();
    else
      current += ch;
  }
  flush();
  return QuadIdeal::from_generators(order, out);
}

std::string format_ideal(const QuadIdeal& I) {
  std::string out = "(";
  for (std::size_t i = 0; i < I.generators().size(); ++i)
    out += (i ? ", " : "") + I.order().format(I.generators()[i]);
  return out + ")";
}

Principality is_principal(const QuadIdeal& I) {
  const mpz_class absd(static_cast<long>(-I.order().quad_d()));
  const mpz_class target = I.a() * I.c();  // den^2 N(I)
  Principality out;
  // Lattice points u (a, 0) + v (b, c) = (X, Y) with X^2 + |d| Y^2 = a c; |d| (v c)^2 <= a c.
  mpz_class vmax;
  {
    const mpz_class bound = I.a() / (absd * I.c());
    mpz_sqrt(vmax.get_mpz_t(), bound.get_mpz_t());
  }
  for (mpz_class k = 0; k <= 2 * vmax; ++k) {
    // v = 0, 1, -1, 2, -2, ...
    const mpz_class v = (k % 2 == 1) ? mpz_class((k + 1) / 2) : mpz_class(-(k / 2));
    const mpz_class Y = v * I.c();
    const mpz_class rest = target - absd * Y * Y;
    if (rest < 0) continue;
    if (!mpz_perfect_square_p(rest.get_mpz_t())) {
      ++out.lattice_points;
      continue;
    }
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), rest.get_mpz_t());
    for (const mpz_class& X : {s, mpz_class(-s)}) {
      ++out.lattice_points;
      if (floor_mod(X - v * I.b(), I.a()) != 0) continue;
      const QuadNumber x{mpq_class(X, I.den()), mpq_class(Y, I.den())};
      QuadNumber xc = x;
      xc.re.canonicalize();
      xc.im.canonicalize();
      const auto P = QuadIdeal::from_generators(I.order(), {xc});
      if (P == I) {
        out.principal = true;
        out.generator = xc;
        return out;
      }
      if (s == 0) break;
    }
  }
  return out;
}

IdealAlgebra::IdealAlgebra(QuadIdeal L) : L_(L), L_inv_(ideal_inverse(L)) {}

bool IdealAlgebra::is_member(const Matrix& x) const {
  if (x.rows() != 2 || x.cols() != 2) return false;
  for (const auto& e : x.entries())
    if (!std::holds_alternative<QuadNumber>(e)) return false;
  const auto q = [&](std::size_t i, std::size_t j) { return std::get<QuadNumber>(x(i, j)); };
  return is_integral(q(0, 0)) && is_integral(q(1, 1)) && L_inv_.contains(q(0, 1)) && L_.contains(q(1, 0));
}

Matrix IdealAlgebra::sigma(const Matrix& x) const { return Matrix(2, 2, {x(1, 1), x(0, 1), x(1, 0), x(0, 0)}); }

Matrix IdealAlgebra::mul(const Matrix& x, const Matrix& y) const { return orthcert::mul(order(), x, y); }

RingElem IdealAlgebra::det(const Matrix& x) const {
  const auto& R = order();
  return R.sub(R.mul(x(0, 0), x(1, 1)), R.mul(x(0, 1), x(1, 0)));
}

Matrix IdealAlgebra::one() const { return identity(order(), 2); }

Matrix IdealAlgebra::random_member(std::mt19937_64& rng) const {
  std::uniform_int_distribution<long> coef(-3, 3);
  const auto integer = [&] { return QuadNumber{coef(rng), coef(rng)}; };
  return Matrix(2, 2, {integer(), random_in(L_inv_, rng), random_in(L_, rng), integer()});
}

RingElem IdealAlgebra::form(const std::array<RingElem, 2>& m1, const std::array<RingElem, 2>& m2) const {
  const auto& R = order();
  return R.add(R.mul(m1[0], m2[1]), R.mul(m2[0], m1[1]));
}

std::array<RingElem, 2> IdealAlgebra::act(const Matrix& x, const std::array<RingElem, 2>& m) const {
  const auto& R = order();
  return {R.add(R.mul(x(0, 0), m[0]), R.mul(x(0, 1), m[1])), R.add(R.mul(x(1, 0), m[0]), R.mul(x(1, 1), m[1]))};
}

std::array<RingElem, 2> IdealAlgebra::random_module_element(std::mt19937_64& rng) const {
  std::uniform_int_distribution<long> coef(-3, 3);
  return {QuadNumber{coef(rng), coef(rng)}, random_in(L_, rng)};
}

IdealAlgebra build_ideal_algebra(const QuadIdeal& L, std::mt19937_64& rng, int samples) {
  IdealAlgebra A(L);
  for (int s = 0; s < samples; ++s) {
    const Matrix x = A.random_member(rng), y = A.random_member(rng);
    if (!A.is_member(A.mul(x, y))) throw IdentityViolation("closure", "product left the algebra");
    if (!A.is_member(A.sigma(x))) throw IdentityViolation("closure", "sigma left the algebra");
    if (A.sigma(A.sigma(x)) != x) throw IdentityViolation("sigma^2=1", "sigma is not of order two");
    if (A.sigma(A.mul(x, y)) != A.mul(A.sigma(y), A.sigma(x)))
      throw IdentityViolation("sigma(xy)=sigma(y)sigma(x)", "sigma is not an anti-automorphism");
    const auto m1 = A.random_module_element(rng), m2 = A.random_module_element(rng);
    if (A.form(A.act(x, m1), m2) != A.form(m1, A.act(A.sigma(x), m2)))
      throw IdentityViolation("adjoint", "sigma is not adjoint to f");
  }
  return A;
}

IdealAudit audit_no_norm_minus_one(const IdealAlgebra& A) {
  const auto& R = A.order();
  IdealAudit out;
  out.order = R.to_string();
  for (const auto& g : A.L().generators()) out.L_gens.push_back(R.format(g));
  out.identities = structural_identities();
  for (const auto& id : out.identities)
    if (!id.verified) throw IdentityViolation("structural identity", id.name + " does not expand correctly");
  out.consequence = "a = d = 0, c in L, b = c^-1 in L^-1, hence L = cR";
  out.principality = is_principal(A.L());
  if (!out.principality.principal) {
    out.verdict = "O_equals_SO";
    return out;
  }
  out.verdict = "norm_minus_one_exists";
  const RingElem x = *out.principality.generator;
  const RingElem x_inv = *R.field_inverse(x);
  Matrix u(2, 2, {R.zero(), x_inv, x, R.zero()});
  if (!A.is_member(u)) throw IdentityViolation("witness", "witness is not in the algebra");
  if (A.mul(A.sigma(u), u) != A.one()) throw IdentityViolation("witness", "sigma(u) u != 1");
  if (A.det(u) != R.from_int(-1)) throw IdentityViolation("witness", "det u != -1");
  out.witness = std::move(u);
  return out;
}

void verify_audit(const IdealAlgebra& A, const IdealAudit& audit) {
  const auto& R = A.order();
  const auto fresh = structural_identities();
  if (audit.identities.size() != fresh.size())
    throw IdentityViolation("structural identity", "wrong number of identities");
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    const auto& got = audit.identities[i];
    if (got.name != fresh[i].name || got.lhs != fresh[i].lhs || got.combination != fresh[i].combination ||
        !got.verified || !fresh[i].verified)
      throw IdentityViolation("structural identity", "identity " + fresh[i].name + " does not check");
  }
  // Non-principality has no short certificate; the norm-ellipse search is finite and cheap.
  const auto p = is_principal(A.L());
  if (p.principal != audit.principality.principal) throw IdentityViolation("principal", "principality mismatch");
  if (audit.principality.generator) {
    const auto G = QuadIdeal::from_generators(R, {*audit.principality.generator});
    if (!(G == A.L())) throw IdentityViolation("principal", "recorded generator does not generate L");
  }
  const std::string verdict = p.principal ? "norm_minus_one_exists" : "O_equals_SO";
  if (audit.verdict != verdict) throw IdentityViolation("verdict", "verdict should be " + verdict);
  if (p.principal) {
    if (!audit.witness) throw IdentityViolation("witness", "principal L needs a witness");
    const Matrix& u = *audit.witness;
    if (!A.is_member(u) || A.mul(A.sigma(u), u) != A.one() || A.det(u) != R.from_int(-1))
      throw IdentityViolation("witness", "witness is not an isometry of determinant -1 in the algebra");
  } else if (audit.witness) {
    throw IdentityViolation("verdict", "non-principal L cannot carry a witness");
  }
}

}  // namespace orthcert
