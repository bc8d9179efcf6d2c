#include "orthcert/rings.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "orthcert/errors.hpp"

namespace orthcert {

// ---------------------------------------------------------------------------
// Integer helpers
// ---------------------------------------------------------------------------

std::int64_t mod_floor(std::int64_t a, std::int64_t n) {
  std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t n) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % n);
}

std::int64_t gcd_i64(std::int64_t a, std::int64_t b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& s, std::int64_t& t) {
  std::int64_t old_r = a, r = b, old_s = 1, cur_s = 0, old_t = 0, cur_t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * cur_s;
    old_s = cur_s;
    cur_s = tmp;
    tmp = old_t - q * cur_t;
    old_t = cur_t;
    cur_t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  s = old_s;
  t = old_t;
  return old_r;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

namespace {

// ---------------------------------------------------------------------------
// Polynomials over F_p on raw coefficient vectors (low degree first)
// ---------------------------------------------------------------------------

using Coeffs = std::vector<std::int64_t>;

void trim(Coeffs& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

// Remainder of a modulo b (b nonzero) over F_p.
Coeffs poly_rem(Coeffs a, Coeffs b, std::int64_t p) {
  trim(a);
  trim(b);
  std::int64_t s, t;
  ext_gcd(b.back(), p, s, t);
  const std::int64_t lead_inv = mod_floor(s, p);
  while (a.size() >= b.size()) {
    const std::int64_t c = mul_mod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t j = 0; j < b.size(); ++j)
      a[shift + j] = mod_floor(a[shift + j] - mul_mod(c, b[j], p), p);
    trim(a);
  }
  return a;
}

bool poly_irreducible(const Coeffs& modulus, std::int64_t p) {
  const int k = static_cast<int>(modulus.size()) - 1;
  for (int deg = 1; deg <= k / 2; ++deg) {
    std::uint64_t count = 1;
    for (int i = 0; i < deg; ++i) count *= static_cast<std::uint64_t>(p);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Coeffs f(deg + 1, 0);
      f[deg] = 1;
      std::uint64_t rest = idx;
      for (int i = 0; i < deg; ++i) {
        f[i] = static_cast<std::int64_t>(rest % p);
        rest /= p;
      }
      if (poly_rem(modulus, f, p).empty()) return false;
    }
  }
  return true;
}

Coeffs lowest_irreducible(std::int64_t p, int k) {
  std::uint64_t count = 1;
  for (int i = 0; i < k; ++i) count *= static_cast<std::uint64_t>(p);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    // c0 is the most significant digit: lexicographic order on the low-to-high list.
    Coeffs f(k + 1, 0);
    f[k] = 1;
    std::uint64_t rest = idx;
    for (int i = k - 1; i >= 0; --i) {
      f[i] = static_cast<std::int64_t>(rest % p);
      rest /= p;
    }
    if (poly_irreducible(f, p)) return f;
  }
  throw InvalidParameter("no irreducible polynomial of degree " + std::to_string(k));
}

// ---------------------------------------------------------------------------
// Atom arithmetic on Residues slices
// ---------------------------------------------------------------------------

void atom_add(const RingAtom& a, const Residues& x, const Residues& y, Residues& out) {
  const std::int64_t m = a.n;
  for (std::size_t i = a.offset; i < a.offset + a.width(); ++i) {
    std::int64_t v = x[i] + y[i];
    if (v >= m) v -= m;
    out[i] = v;
  }
}

void atom_sub(const RingAtom& a, const Residues& x, const Residues& y, Residues& out) {
  const std::int64_t m = a.n;
  for (std::size_t i = a.offset; i < a.offset + a.width(); ++i) {
    std::int64_t v = x[i] - y[i];
    if (v < 0) v += m;
    out[i] = v;
  }
}

void atom_mul(const RingAtom& a, const Residues& x, const Residues& y, Residues& out) {
  if (!a.is_field) {
    out[a.offset] = mul_mod(x[a.offset], y[a.offset], a.n);
    return;
  }
  const int k = a.k;
  const std::int64_t p = a.n;
  std::vector<std::int64_t> prod(2 * k - 1, 0);
  for (int i = 0; i < k; ++i) {
    if (x[a.offset + i] == 0) continue;
    for (int j = 0; j < k; ++j)
      prod[i + j] = (prod[i + j] + mul_mod(x[a.offset + i], y[a.offset + j], p)) % p;
  }
  for (int deg = 2 * k - 2; deg >= k; --deg) {
    const std::int64_t c = prod[deg];
    if (c == 0) continue;
    prod[deg] = 0;
    for (int j = 0; j < k; ++j)
      prod[deg - k + j] = mod_floor(prod[deg - k + j] - mul_mod(c, a.modulus[j], p), p);
  }
  for (int i = 0; i < k; ++i) out[a.offset + i] = prod[i];
}

bool atom_is_zero(const RingAtom& a, const Residues& x) {
  for (std::size_t i = a.offset; i < a.offset + a.width(); ++i)
    if (x[i] != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Textual element expressions: sums of c * s^e with rational c.
// ---------------------------------------------------------------------------

std::string strip(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

std::map<int, mpq_class> parse_expression(std::string_view text, char symbol) {
  const std::string s = strip(text);
  if (s.empty()) throw ParseError("empty element", std::string(text));
  std::map<int, mpq_class> terms;
  std::size_t i = 0;
  auto read_int = [&](std::size_t& pos) -> mpz_class {
    const std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw ParseError("expected integer", s.substr(start));
    return mpz_class(s.substr(start, pos - start));
  };
  bool first = true;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (!first) {
      throw ParseError("expected '+' or '-'", s.substr(i));
    }
    first = false;
    if (i >= s.size()) throw ParseError("dangling sign", std::string(text));
    mpq_class coeff = 1;
    bool have_number = false;
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      mpz_class num = read_int(i);
      mpz_class den = 1;
      if (i < s.size() && s[i] == '/') {
        ++i;
        den = read_int(i);
        if (den == 0) throw ParseError("zero denominator", std::string(text));
      }
      coeff = mpq_class(num, den);
      coeff.canonicalize();
      have_number = true;
    }
    int exponent = 0;
    if (i < s.size() && s[i] == '*') {
      if (!have_number) throw ParseError("unexpected '*'", s.substr(i));
      ++i;
      if (i >= s.size() || s[i] != symbol) throw ParseError("expected symbol after '*'", s.substr(i));
    }
    if (i < s.size() && s[i] == symbol) {
      ++i;
      exponent = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        exponent = static_cast<int>(read_int(i).get_si());
      }
    } else if (!have_number) {
      throw ParseError("unexpected token", s.substr(i));
    }
    terms[exponent] += sign * coeff;
  }
  return terms;
}

std::string format_expression(const std::vector<mpq_class>& coeffs, char symbol) {
  std::string out;
  for (std::size_t e = 0; e < coeffs.size(); ++e) {
    const mpq_class& c = coeffs[e];
    if (c == 0) continue;
    std::string term;
    if (e == 0) {
      term = c.get_str();
    } else {
      std::string mono(1, symbol);
      if (e > 1) mono += "^" + std::to_string(e);
      if (c == 1)
        term = mono;
      else if (c == -1)
        term = "-" + mono;
      else
        term = c.get_str() + "*" + mono;
    }
    if (!out.empty() && term.front() != '-') out += "+";
    out += term;
  }
  return out.empty() ? "0" : out;
}

std::vector<std::string> split_top_level(std::string_view s) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

std::uint64_t RingAtom::size() const {
  if (!is_field) return static_cast<std::uint64_t>(n);
  std::uint64_t s = 1;
  for (int i = 0; i < k; ++i) s *= static_cast<std::uint64_t>(n);
  return s;
}

// ---------------------------------------------------------------------------
// RingDesc
// ---------------------------------------------------------------------------

struct RingDesc::Impl {
  RingKind kind = RingKind::Modular;
  std::int64_t param = 0;  // n, p or d
  int k = 1;
  Coeffs modulus;
  std::vector<RingDesc> factors;
  std::vector<std::size_t> factor_offsets;
  std::vector<RingAtom> atoms;
  std::size_t width = 0;
  std::string text;
  bool two_inv = false;
};

RingDesc RingDesc::modular(std::int64_t n) {
  if (n < 2) throw InvalidParameter("modulus must be >= 2, got " + std::to_string(n));
  if (n > (std::int64_t{1} << 40)) throw InvalidParameter("modulus too large: " + std::to_string(n));
  auto impl = std::make_shared<Impl>();
  impl->kind = RingKind::Modular;
  impl->param = n;
  RingAtom atom;
  atom.n = n;
  impl->atoms = {atom};
  impl->width = 1;
  impl->text = "Z/" + std::to_string(n);
  impl->two_inv = n % 2 == 1;
  return RingDesc(std::move(impl));
}

RingDesc RingDesc::finite_field(std::int64_t p, int k, std::optional<std::vector<std::int64_t>> modulus) {
  if (!is_prime(p)) throw InvalidParameter("characteristic is not prime: " + std::to_string(p));
  if (k < 1) throw InvalidParameter("extension degree must be >= 1");
  {
    std::uint64_t q = 1;
    for (int i = 0; i < k; ++i) {
      q *= static_cast<std::uint64_t>(p);
      if (q > (std::uint64_t{1} << 31)) throw InvalidParameter("field too large");
    }
  }
  Coeffs mod;
  if (modulus) {
    mod = *modulus;
    if (static_cast<int>(mod.size()) != k + 1)
      throw InvalidParameter("modulus must have degree " + std::to_string(k));
    for (auto& c : mod) c = mod_floor(c, p);
    if (mod.back() != 1) throw InvalidParameter("modulus is not monic");
    if (!poly_irreducible(mod, p)) {
      std::string coeffs;
      for (std::size_t i = 0; i < mod.size(); ++i) coeffs += (i ? "," : "") + std::to_string(mod[i]);
      throw InvalidParameter("modulus is reducible over F_" + std::to_string(p) + ": " + coeffs);
    }
  } else {
    mod = lowest_irreducible(p, k);
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = RingKind::FiniteField;
  impl->param = p;
  impl->k = k;
  impl->modulus = mod;
  RingAtom atom;
  atom.is_field = true;
  atom.n = p;
  atom.k = k;
  atom.modulus = mod;
  impl->atoms = {atom};
  impl->width = static_cast<std::size_t>(k);
  impl->text = "GF(" + std::to_string(p) + "^" + std::to_string(k) + ")";
  if (k > 1) {
    impl->text += ";";
    for (std::size_t i = 0; i < mod.size(); ++i) impl->text += (i ? "," : "") + std::to_string(mod[i]);
  }
  impl->two_inv = p != 2;
  return RingDesc(std::move(impl));
}

RingDesc RingDesc::product(std::vector<RingDesc> factors) {
  if (factors.empty()) throw InvalidParameter("empty product");
  auto impl = std::make_shared<Impl>();
  impl->kind = RingKind::Product;
  impl->two_inv = true;
  impl->text = "prod(";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const RingDesc& f = factors[i];
    if (!f.is_finite()) throw InvalidParameter("product factors must be finite: " + f.to_string());
    impl->factor_offsets.push_back(impl->width);
    for (RingAtom atom : f.atoms()) {
      atom.offset += impl->width;
      impl->atoms.push_back(atom);
    }
    impl->width += f.width();
    impl->two_inv = impl->two_inv && f.two_invertible();
    impl->text += (i ? "," : "") + f.to_string();
  }
  impl->text += ")";
  impl->factors = std::move(factors);
  return RingDesc(std::move(impl));
}

RingDesc RingDesc::rationals() {
  auto impl = std::make_shared<Impl>();
  impl->kind = RingKind::Rationals;
  impl->text = "Q";
  impl->two_inv = true;
  return RingDesc(std::move(impl));
}

RingDesc RingDesc::quad_order(std::int64_t d) {
  if (d >= 0) throw InvalidParameter("quadratic order parameter must be negative: " + std::to_string(d));
  for (const auto& [p, e] : factorize(-d))
    if (e > 1) throw InvalidParameter("not squarefree: " + std::to_string(d));
  auto impl = std::make_shared<Impl>();
  impl->kind = RingKind::QuadOrder;
  impl->param = d;
  impl->text = "Zsqrt[" + std::to_string(d) + "]";
  impl->two_inv = false;
  return RingDesc(std::move(impl));
}

RingKind RingDesc::kind() const { return impl_->kind; }
std::string RingDesc::to_string() const { return impl_->text; }
bool RingDesc::two_invertible() const { return impl_->two_inv; }
bool RingDesc::is_finite() const {
  return kind() == RingKind::Modular || kind() == RingKind::FiniteField || kind() == RingKind::Product;
}
bool RingDesc::is_field() const {
  if (kind() == RingKind::Rationals || kind() == RingKind::FiniteField) return true;
  return kind() == RingKind::Modular && is_prime(impl_->param);
}

std::optional<std::uint64_t> RingDesc::size() const {
  if (!is_finite()) return std::nullopt;
  unsigned __int128 s = 1;
  for (const auto& a : impl_->atoms) {
    s *= a.size();
    if (s > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  }
  return static_cast<std::uint64_t>(s);
}

std::int64_t RingDesc::modulus() const {
  if (kind() != RingKind::Modular) throw DomainError("not a modular ring: " + to_string());
  return impl_->param;
}
std::int64_t RingDesc::characteristic_p() const {
  if (kind() != RingKind::FiniteField) throw DomainError("not a finite field: " + to_string());
  return impl_->param;
}
int RingDesc::extension_degree() const {
  if (kind() != RingKind::FiniteField) throw DomainError("not a finite field: " + to_string());
  return impl_->k;
}
const std::vector<std::int64_t>& RingDesc::field_modulus() const {
  if (kind() != RingKind::FiniteField) throw DomainError("not a finite field: " + to_string());
  return impl_->modulus;
}
std::int64_t RingDesc::quad_d() const {
  if (kind() != RingKind::QuadOrder) throw DomainError("not a quadratic order: " + to_string());
  return impl_->param;
}
const std::vector<RingDesc>& RingDesc::factors() const { return impl_->factors; }
const std::vector<RingAtom>& RingDesc::atoms() const { return impl_->atoms; }
std::size_t RingDesc::width() const { return impl_->width; }

RingElem RingDesc::zero() const { return from_int(0); }
RingElem RingDesc::one() const { return from_int(1); }

RingElem RingDesc::from_int(std::int64_t v) const { return from_integer(mpz_class(static_cast<long>(v))); }

RingElem RingDesc::from_integer(const mpz_class& v) const {
  switch (kind()) {
    case RingKind::Rationals:
      return mpq_class(v);
    case RingKind::QuadOrder:
      return QuadNumber{mpq_class(v), mpq_class(0)};
    default: {
      Residues r(width(), 0);
      for (const auto& a : atoms()) {
        mpz_class m = v % a.n;
        if (m < 0) m += a.n;
        r[a.offset] = m.get_si();
      }
      return r;
    }
  }
}

RingElem RingDesc::from_rational(const mpq_class& q) const {
  if (!is_finite()) {
    if (kind() == RingKind::Rationals) return q;
    return QuadNumber{q, mpq_class(0)};
  }
  const RingElem num = from_integer(q.get_num());
  const RingElem den = from_integer(q.get_den());
  auto inv = unit_inverse(den);
  if (!inv) throw InvalidParameter("denominator " + q.get_den().get_str() + " not invertible in " + to_string());
  return mul(num, *inv);
}

RingElem RingDesc::add(const RingElem& x, const RingElem& y) const {
  switch (kind()) {
    case RingKind::Rationals:
      return mpq_class(std::get<mpq_class>(x) + std::get<mpq_class>(y));
    case RingKind::QuadOrder: {
      const auto& a = std::get<QuadNumber>(x);
      const auto& b = std::get<QuadNumber>(y);
      return QuadNumber{a.re + b.re, a.im + b.im};
    }
    default: {
      const auto& a = std::get<Residues>(x);
      const auto& b = std::get<Residues>(y);
      Residues out(width());
      for (const auto& atom : atoms()) atom_add(atom, a, b, out);
      return out;
    }
  }
}

RingElem RingDesc::sub(const RingElem& x, const RingElem& y) const {
  switch (kind()) {
    case RingKind::Rationals:
      return mpq_class(std::get<mpq_class>(x) - std::get<mpq_class>(y));
    case RingKind::QuadOrder: {
      const auto& a = std::get<QuadNumber>(x);
      const auto& b = std::get<QuadNumber>(y);
      return QuadNumber{a.re - b.re, a.im - b.im};
    }
    default: {
      const auto& a = std::get<Residues>(x);
      const auto& b = std::get<Residues>(y);
      Residues out(width());
      for (const auto& atom : atoms()) atom_sub(atom, a, b, out);
      return out;
    }
  }
}

RingElem RingDesc::neg(const RingElem& x) const { return sub(zero(), x); }

RingElem RingDesc::mul(const RingElem& x, const RingElem& y) const {
  switch (kind()) {
    case RingKind::Rationals:
      return mpq_class(std::get<mpq_class>(x) * std::get<mpq_class>(y));
    case RingKind::QuadOrder: {
      const auto& a = std::get<QuadNumber>(x);
      const auto& b = std::get<QuadNumber>(y);
      const mpq_class d(static_cast<long>(impl_->param));
      return QuadNumber{a.re * b.re + d * a.im * b.im, a.re * b.im + a.im * b.re};
    }
    default: {
      const auto& a = std::get<Residues>(x);
      const auto& b = std::get<Residues>(y);
      Residues out(width());
      for (const auto& atom : atoms()) atom_mul(atom, a, b, out);
      return out;
    }
  }
}

RingElem RingDesc::pow(const RingElem& x, std::uint64_t e) const {
  RingElem result = one();
  RingElem base = x;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return result;
}

bool RingDesc::is_zero(const RingElem& x) const { return x == zero(); }
bool RingDesc::is_one(const RingElem& x) const { return x == one(); }

std::optional<RingElem> RingDesc::unit_inverse(const RingElem& x) const {
  switch (kind()) {
    case RingKind::Rationals: {
      const auto& q = std::get<mpq_class>(x);
      if (q == 0) return std::nullopt;
      return mpq_class(1 / q);
    }
    case RingKind::QuadOrder: {
      const auto& a = std::get<QuadNumber>(x);
      if (a.re.get_den() != 1 || a.im.get_den() != 1) return std::nullopt;
      const mpq_class norm = a.re * a.re - impl_->param * a.im * a.im;
      if (norm != 1 && norm != -1) return std::nullopt;
      return field_inverse(x);
    }
    default: {
      const auto& r = std::get<Residues>(x);
      Residues out(width(), 0);
      for (const auto& atom : atoms()) {
        if (!atom.is_field) {
          std::int64_t s, t;
          if (ext_gcd(r[atom.offset], atom.n, s, t) != 1) return std::nullopt;
          out[atom.offset] = mod_floor(s, atom.n);
          continue;
        }
        if (atom_is_zero(atom, r)) return std::nullopt;
        // x^(q-2) inside this atom.
        RingAtom local = atom;
        local.offset = 0;
        Residues base(r.begin() + atom.offset, r.begin() + atom.offset + atom.width());
        Residues acc(atom.width(), 0);
        acc[0] = 1;
        for (std::uint64_t e = atom.size() - 2; e > 0; e >>= 1) {
          if (e & 1) atom_mul(local, acc, base, acc);
          atom_mul(local, base, base, base);
        }
        std::copy(acc.begin(), acc.end(), out.begin() + atom.offset);
      }
      return out;
    }
  }
}

std::optional<RingElem> RingDesc::field_inverse(const RingElem& x) const {
  if (kind() != RingKind::QuadOrder) return unit_inverse(x);
  const auto& a = std::get<QuadNumber>(x);
  const mpq_class norm = a.re * a.re - impl_->param * a.im * a.im;
  if (norm == 0) return std::nullopt;
  return QuadNumber{a.re / norm, -a.im / norm};
}

std::string RingDesc::format(const RingElem& x) const {
  switch (kind()) {
    case RingKind::Rationals:
      return std::get<mpq_class>(x).get_str();
    case RingKind::QuadOrder: {
      const auto& a = std::get<QuadNumber>(x);
      return format_expression({a.re, a.im}, 'w');
    }
    case RingKind::Modular:
      return std::to_string(std::get<Residues>(x)[0]);
    case RingKind::FiniteField: {
      const auto& r = std::get<Residues>(x);
      std::vector<mpq_class> c;
      for (auto v : r) c.emplace_back(static_cast<long>(v));
      return format_expression(c, 'x');
    }
    case RingKind::Product: {
      const auto& r = std::get<Residues>(x);
      std::string out = "(";
      for (std::size_t i = 0; i < impl_->factors.size(); ++i) {
        const auto& f = impl_->factors[i];
        const auto off = impl_->factor_offsets[i];
        Residues part(r.begin() + off, r.begin() + off + f.width());
        out += (i ? "," : "") + f.format(part);
      }
      return out + ")";
    }
  }
  return {};
}

RingElem RingDesc::parse_elem(std::string_view text) const {
  switch (kind()) {
    case RingKind::Rationals: {
      const auto terms = parse_expression(text, '\0');
      mpq_class v = 0;
      for (const auto& [e, c] : terms) {
        if (e != 0) throw ParseError("unexpected symbol in rational", std::string(text));
        v += c;
      }
      return v;
    }
    case RingKind::QuadOrder: {
      const auto terms = parse_expression(text, 'w');
      const RingElem w = QuadNumber{0, 1};
      RingElem v = zero();
      for (const auto& [e, c] : terms) {
        if (e < 0) throw ParseError("negative exponent", std::string(text));
        v = add(v, mul(QuadNumber{c, 0}, pow(w, static_cast<std::uint64_t>(e))));
      }
      return v;
    }
    case RingKind::Modular: {
      const auto terms = parse_expression(text, '\0');
      RingElem v = zero();
      for (const auto& [e, c] : terms) {
        if (e != 0) throw ParseError("unexpected symbol in residue", std::string(text));
        v = add(v, from_rational(c));
      }
      return v;
    }
    case RingKind::FiniteField: {
      const auto terms = parse_expression(text, 'x');
      Residues gen(width(), 0);
      if (impl_->k > 1)
        gen[1] = 1;
      else
        gen[0] = mod_floor(-impl_->modulus[0], impl_->param);
      RingElem v = zero();
      for (const auto& [e, c] : terms) {
        if (e < 0) throw ParseError("negative exponent", std::string(text));
        v = add(v, mul(from_rational(c), pow(gen, static_cast<std::uint64_t>(e))));
      }
      return v;
    }
    case RingKind::Product: {
      const std::string s = strip(text);
      if (s.size() < 2 || s.front() != '(' || s.back() != ')')
        throw ParseError("product element must be parenthesised", s);
      const auto parts = split_top_level(std::string_view(s).substr(1, s.size() - 2));
      if (parts.size() != impl_->factors.size())
        throw ParseError("wrong number of components", s);
      Residues out(width(), 0);
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto part = std::get<Residues>(impl_->factors[i].parse_elem(parts[i]));
        std::copy(part.begin(), part.end(), out.begin() + impl_->factor_offsets[i]);
      }
      return out;
    }
  }
  return zero();
}

void RingDesc::validate(const RingElem& x) const {
  switch (kind()) {
    case RingKind::Rationals:
      if (!std::holds_alternative<mpq_class>(x)) throw InvalidParameter("expected a rational element");
      return;
    case RingKind::QuadOrder:
      if (!std::holds_alternative<QuadNumber>(x)) throw InvalidParameter("expected a quadratic element");
      return;
    default: {
      if (!std::holds_alternative<Residues>(x)) throw InvalidParameter("expected a residue element");
      const auto& r = std::get<Residues>(x);
      if (r.size() != width()) throw InvalidParameter("element width mismatch for " + to_string());
      for (const auto& atom : atoms())
        for (std::size_t i = atom.offset; i < atom.offset + atom.width(); ++i)
          if (r[i] < 0 || r[i] >= atom.n) throw InvalidParameter("non-canonical residue for " + to_string());
    }
  }
}

RingElem RingDesc::element_at(std::uint64_t index) const {
  if (!is_finite()) throw DomainError("element enumeration needs a finite ring");
  Residues r(width(), 0);
  for (auto it = atoms().rbegin(); it != atoms().rend(); ++it) {
    for (std::size_t i = it->offset + it->width(); i-- > it->offset;) {
      const auto base = static_cast<std::uint64_t>(it->n);
      r[i] = static_cast<std::int64_t>(index % base);
      index /= base;
    }
  }
  return r;
}

RingElem RingDesc::random(std::mt19937_64& rng) const {
  switch (kind()) {
    case RingKind::Rationals: {
      std::uniform_int_distribution<long> num(-5, 5), den(1, 5);
      mpq_class q(num(rng), den(rng));
      q.canonicalize();
      return q;
    }
    case RingKind::QuadOrder: {
      std::uniform_int_distribution<long> num(-4, 4);
      return QuadNumber{mpq_class(num(rng)), mpq_class(num(rng))};
    }
    default: {
      Residues r(width(), 0);
      for (const auto& atom : atoms()) {
        std::uniform_int_distribution<std::int64_t> dist(0, atom.n - 1);
        for (std::size_t i = atom.offset; i < atom.offset + atom.width(); ++i) r[i] = dist(rng);
      }
      return r;
    }
  }
}

RingDesc RingDesc::atom_ring(const RingAtom& atom) {
  if (atom.is_field) return finite_field(atom.n, atom.k, atom.modulus);
  return modular(atom.n);
}

Residues RingDesc::project_atom(const RingElem& x, std::size_t atom) const {
  const auto& a = atoms().at(atom);
  const auto& r = std::get<Residues>(x);
  return Residues(r.begin() + a.offset, r.begin() + a.offset + a.width());
}

RingElem RingDesc::embed_atoms(const std::vector<Residues>& parts) const {
  Residues out(width(), 0);
  for (std::size_t i = 0; i < atoms().size(); ++i)
    std::copy(parts[i].begin(), parts[i].end(), out.begin() + atoms()[i].offset);
  return out;
}

// ---------------------------------------------------------------------------
// Ring spec grammar
// ---------------------------------------------------------------------------

namespace {

class SpecParser {
 public:
  explicit SpecParser(std::string s) : s_(std::move(s)) {}

  RingDesc parse_all() {
    RingDesc r = parse();
    if (pos_ != s_.size()) throw ParseError("trailing input in ring spec", s_.substr(pos_));
    return r;
  }

 private:
  RingDesc parse() {
    if (starts("prod(")) {
      pos_ += 5;
      std::vector<RingDesc> factors;
      factors.push_back(parse());
      while (peek() == ',') {
        ++pos_;
        factors.push_back(parse());
      }
      expect(')');
      return RingDesc::product(std::move(factors));
    }
    if (starts("Zsqrt[")) {
      pos_ += 6;
      const auto start = pos_;
      const std::int64_t d = integer();
      expect(']');
      try {
        return RingDesc::quad_order(d);
      } catch (const InvalidParameter& e) {
        throw ParseError(e.what(), s_.substr(start, pos_ - start - 1));
      }
    }
    if (starts("Z/")) {
      pos_ += 2;
      const auto start = pos_;
      const std::int64_t n = integer();
      try {
        return RingDesc::modular(n);
      } catch (const InvalidParameter& e) {
        throw ParseError(e.what(), s_.substr(start, pos_ - start));
      }
    }
    if (starts("GF(")) {
      pos_ += 3;
      const auto start = pos_;
      const std::int64_t p = integer();
      expect('^');
      const std::int64_t k = integer();
      expect(')');
      const std::string token = s_.substr(start - 3, pos_ - start + 3);
      std::optional<std::vector<std::int64_t>> modulus;
      if (peek() == ';') {
        ++pos_;
        std::vector<std::int64_t> coeffs{integer()};
        for (std::int64_t i = 0; i < k; ++i) {
          expect(',');
          coeffs.push_back(integer());
        }
        modulus = coeffs;
      }
      try {
        return RingDesc::finite_field(p, static_cast<int>(k), modulus);
      } catch (const InvalidParameter& e) {
        throw ParseError(e.what(), token);
      }
    }
    if (peek() == 'Q') {
      ++pos_;
      return RingDesc::rationals();
    }
    throw ParseError("unknown ring", s_.substr(pos_));
  }

  bool starts(std::string_view prefix) const { return s_.compare(pos_, prefix.size(), prefix) == 0; }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void expect(char c) {
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", s_.substr(pos_));
    ++pos_;
  }
  std::int64_t integer() {
    const auto start = pos_;
    if (peek() == '-' || peek() == '+') ++pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    const std::string tok = s_.substr(start, pos_ - start);
    if (tok.empty() || tok == "-" || tok == "+") throw ParseError("expected integer", s_.substr(start));
    try {
      return std::stoll(tok);
    } catch (const std::exception&) {
      throw ParseError("integer out of range", tok);
    }
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

RingDesc ring_make(std::string_view spec) { return SpecParser(strip(spec)).parse_all(); }

// ---------------------------------------------------------------------------
// Residue split
// ---------------------------------------------------------------------------

ResidueSplit::ResidueSplit(RingDesc ring) : ring_(std::move(ring)) {
  if (!ring_.is_finite()) throw DomainError("residue split needs a finite ring, got " + ring_.to_string());
  const auto& atoms = ring_.atoms();
  std::vector<Residues> rad_parts;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    const auto& atom = atoms[a];
    const std::string prefix = atoms.size() > 1 ? "atom" + std::to_string(a) + ":" : "";
    if (atom.is_field) {
      ideals_.push_back({prefix + "(0)", a, atom.n});
      fields_.push_back(RingDesc::atom_ring(atom));
      rad_parts.push_back(Residues(atom.width(), 0));
      continue;
    }
    std::int64_t rad = 1;
    for (const auto& [p, e] : factorize(atom.n)) {
      ideals_.push_back({prefix + "(" + std::to_string(p) + ")", a, p});
      fields_.push_back(RingDesc::finite_field(p, 1));
      nilpotency_ = std::max(nilpotency_, e);
      rad *= p;
    }
    rad_parts.push_back(Residues{rad % atom.n});
  }
  radical_gen_ = ring_.embed_atoms(rad_parts);
}

RingElem ResidueSplit::project(std::size_t i, const RingElem& x) const {
  const auto& m = ideals_.at(i);
  const auto& atom = ring_.atoms()[m.atom];
  const auto part = ring_.project_atom(x, m.atom);
  if (atom.is_field) return part;
  return Residues{part[0] % m.prime};
}

std::vector<RingElem> ResidueSplit::project_all(const RingElem& x) const {
  std::vector<RingElem> out;
  out.reserve(count());
  for (std::size_t i = 0; i < count(); ++i) out.push_back(project(i, x));
  return out;
}

RingElem ResidueSplit::lift(const std::vector<RingElem>& residues) const {
  if (residues.size() != count()) throw InvalidParameter("expected one residue per maximal ideal");
  const auto& atoms = ring_.atoms();
  std::vector<Residues> parts(atoms.size());
  std::vector<std::int64_t> acc_mod(atoms.size(), 1), acc_val(atoms.size(), 0);
  for (std::size_t i = 0; i < count(); ++i) {
    fields_[i].validate(residues[i]);
    const auto& m = ideals_[i];
    const auto& r = std::get<Residues>(residues[i]);
    if (atoms[m.atom].is_field) {
      parts[m.atom] = r;
      continue;
    }
    // Incremental CRT: x = acc_val mod acc_mod, x = r mod p.
    const std::int64_t p = m.prime, M = acc_mod[m.atom];
    std::int64_t s, t;
    ext_gcd(M % p, p, s, t);
    const std::int64_t k = mul_mod(mod_floor(r[0] - acc_val[m.atom], p), mod_floor(s, p), p);
    acc_val[m.atom] += M * k;
    acc_mod[m.atom] = M * p;
  }
  for (std::size_t a = 0; a < atoms.size(); ++a)
    if (!atoms[a].is_field) parts[a] = Residues{acc_val[a] % atoms[a].n};
  return ring_.embed_atoms(parts);
}

bool ResidueSplit::in_radical(const RingElem& x) const {
  for (std::size_t i = 0; i < count(); ++i)
    if (!fields_[i].is_zero(project(i, x))) return false;
  return true;
}

std::size_t ResidueSplit::index_of(const MaximalIdeal& m) const {
  for (std::size_t i = 0; i < ideals_.size(); ++i)
    if (ideals_[i] == m) return i;
  throw InvalidParameter("unknown maximal ideal " + m.label);
}

ResidueSplit residue_split(const RingDesc& ring) { return ResidueSplit(ring); }

std::optional<RingElem> is_unit(const RingDesc& ring, const RingElem& x) { return ring.unit_inverse(x); }

Mu2Result mu2(const RingDesc& ring) {
  Mu2Result out;
  if (ring.kind() == RingKind::Rationals) {
    out.roots = {ring.one(), ring.from_int(-1)};
    return out;
  }
  if (ring.kind() == RingKind::QuadOrder) {
    out.roots = {ring.one(), ring.from_int(-1)};
    out.derived_by_theory = true;
    return out;
  }
  const auto size = ring.size();
  if (!size || *size > 50'000'000) throw DomainError("ring too large to enumerate mu2: " + ring.to_string());
  for (std::uint64_t i = 0; i < *size; ++i) {
    RingElem x = ring.element_at(i);
    if (ring.is_one(ring.mul(x, x))) out.roots.push_back(std::move(x));
  }
  return out;
}

}  // namespace orthcert
