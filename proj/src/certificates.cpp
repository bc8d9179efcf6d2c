#include "orthcert/certificates.hpp"

#include <set>

#include "orthcert/errors.hpp"

namespace orthcert {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string string_field(const json& j, const char* key) {
  const auto& f = field(j, key);
  if (!f.is_string()) throw SchemaError(std::string("field '") + key + "' must be a string");
  return f.get<std::string>();
}

bool bool_field(const json& j, const char* key) {
  const auto& f = field(j, key);
  if (!f.is_boolean()) throw SchemaError(std::string("field '") + key + "' must be a boolean");
  return f.get<bool>();
}

const json& array_field(const json& j, const char* key) {
  const auto& f = field(j, key);
  if (!f.is_array()) throw SchemaError(std::string("field '") + key + "' must be an array");
  return f;
}

json lift_body(const AlgebraDesc& A, const LiftCertificate& cert) {
  const QuotientCtx ctx = quotient_ctx(A);
  json targets = json::array();
  for (std::size_t i = 0; i < cert.targets.size(); ++i) {
    const auto& F = ctx.residues()[i].base();
    json t = matrix_to_json(F, cert.targets[i]);
    t["ring"] = F.to_string();
    targets.push_back(std::move(t));
  }
  return {{"targets", targets},
          {"lifted", matrix_to_json(A.base(), cert.lifted)},
          {"method", cert.method},
          {"checks",
           {{"isometry", cert.checks.isometry}, {"nrd_one", cert.checks.nrd_one}, {"residues", cert.checks.residues}}}};
}

json header(const char* kind, const AlgebraDesc& A) {
  return {{"schema", kSchema}, {"kind", kind}, {"ring", A.base().to_string()}, {"algebra", algebra_to_json(A)}};
}

void revalidate_lift(const json& j) {
  const AlgebraDesc A = algebra_from_json(field(j, "algebra"));
  const LiftCertificate cert = lift_certificate_from_json(A, j);
  verify_lift(A, cert);
  if (!cert.checks.isometry || !cert.checks.nrd_one || !cert.checks.residues)
    throw IdentityViolation("checks", "recorded checks are not all true");
}

void revalidate_closure(const json& j) {
  const AlgebraDesc A = algebra_from_json(field(j, "algebra"));
  const auto& R = A.base();
  std::vector<AlgElem> group;
  for (const auto& g : array_field(j, "group")) group.push_back(matrix_from_json(R, g));
  std::set<std::vector<std::int64_t>> keys;
  for (const auto& g : group) {
    A.check_member(g);
    if (!is_isometry(A, g)) throw IdentityViolation("isometry", "group element is not an isometry");
    keys.insert(elem_key(g));
  }
  if (keys.size() != group.size()) throw IdentityViolation("group", "repeated group element");
  if (!keys.count(elem_key(A.one()))) throw IdentityViolation("group", "identity missing");
  for (const auto& x : group)
    for (const auto& y : group)
      if (!keys.count(elem_key(A.mul(x, y)))) throw IdentityViolation("group closed", "product outside the group");
  std::size_t special = 0;
  for (const auto& g : group) special += R.is_one(reduced_norm(A, g)) ? 1 : 0;
  const auto recorded_special = field(j, "special").get<std::size_t>();
  const auto missing = field(j, "missing").get<std::size_t>();
  if (special + missing != recorded_special)
    throw IdentityViolation("special count", "special elements in the closure do not match |SO| - missing");
  if (bool_field(j, "contains_so") != (missing == 0))
    throw IdentityViolation("contains_so", "verdict disagrees with the missing count");
}

void revalidate_probe(const json& j) {
  const AlgebraDesc A = algebra_from_json(field(j, "algebra"));
  const auto& R = A.base();
  const int bound = field(j, "bound").get<int>();
  bool all_one = true;
  for (const auto& x : array_field(j, "isometries")) {
    const AlgElem q = A.from_coords(vec_from_json(R, x));
    for (const auto& c : q.entries()) {
      const auto& r = std::get<mpq_class>(c);
      if (abs(r.get_num()) > bound || r.get_den() > bound) throw IdentityViolation("bound", "coordinate exceeds bound");
    }
    if (!is_isometry(A, q)) throw IdentityViolation("isometry", "sampled element is not an isometry");
    all_one = all_one && R.is_one(reduced_norm(A, q));
  }
  if (field(j, "isometry_count").get<std::size_t>() != array_field(j, "isometries").size())
    throw IdentityViolation("isometry_count", "count does not match the sample");
  if (bool_field(j, "all_nrd_one") != all_one) throw IdentityViolation("all_nrd_one", "flag disagrees with the sample");
  const auto& m = field(j, "minus_one");
  if (!m.is_null()) {
    const AlgElem u = A.from_coords(vec_from_json(R, m));
    if (!is_isometry(A, u) || reduced_norm(A, u) != R.from_int(-1))
      throw IdentityViolation("nrd=-1", "witness is not an isometry of reduced norm -1");
  }
}

void revalidate_audit(const json& j) {
  const RingDesc order = ring_make(string_field(j, "order"));
  std::vector<QuadNumber> gens;
  for (const auto& g : array_field(field(j, "L"), "gens"))
    gens.push_back(std::get<QuadNumber>(elem_from_json(order, g)));
  std::mt19937_64 rng(field(j, "seed").get<std::uint64_t>());
  const IdealAlgebra A = build_ideal_algebra(QuadIdeal::from_generators(order, gens), rng);
  IdealAudit audit;
  audit.order = order.to_string();
  for (const auto& id : array_field(j, "structural_identities"))
    audit.identities.push_back(
        {string_field(id, "name"), string_field(id, "lhs"), string_field(id, "combination"), bool_field(id, "verified")});
  audit.principality.principal = bool_field(j, "principal");
  if (!field(j, "generator").is_null())
    audit.principality.generator = std::get<QuadNumber>(elem_from_json(order, field(j, "generator")));
  audit.verdict = string_field(j, "verdict");
  if (!field(j, "witness").is_null()) audit.witness = matrix_from_json(order, field(j, "witness"));
  verify_audit(A, audit);
}

}  // namespace

json elem_to_json(const RingDesc& R, const RingElem& x) { return R.format(x); }

RingElem elem_from_json(const RingDesc& R, const json& j) {
  if (j.is_number_integer()) return R.from_int(j.get<std::int64_t>());
  if (!j.is_string()) throw SchemaError("ring element must be a string or an integer");
  return R.parse_elem(j.get<std::string>());
}

json matrix_to_json(const RingDesc& R, const Matrix& m) {
  json entries = json::array();
  for (const auto& x : m.entries()) entries.push_back(elem_to_json(R, x));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Matrix matrix_from_json(const RingDesc& R, const json& j) {
  if (j.is_array()) {
    // [[...], [...]] shorthand.
    std::vector<RingElem> entries;
    std::size_t cols = 0;
    for (const auto& row : j) {
      if (!row.is_array()) throw SchemaError("matrix rows must be arrays");
      if (cols && row.size() != cols) throw SchemaError("ragged matrix");
      cols = row.size();
      for (const auto& x : row) entries.push_back(elem_from_json(R, x));
    }
    if (j.empty() || cols == 0) throw SchemaError("empty matrix");
    return Matrix(j.size(), cols, std::move(entries));
  }
  const auto rows = field(j, "rows").get<std::size_t>();
  const auto cols = field(j, "cols").get<std::size_t>();
  const auto& e = array_field(j, "entries");
  if (e.size() != rows * cols) throw SchemaError("matrix entry count does not match rows * cols");
  std::vector<RingElem> entries;
  for (const auto& x : e) entries.push_back(elem_from_json(R, x));
  return Matrix(rows, cols, std::move(entries));
}

json poly_to_json(const RingDesc& R, const Poly& f) {
  json out = json::array();
  for (const auto& c : f.coeffs) out.push_back(elem_to_json(R, c));
  return out;
}

Poly poly_from_json(const RingDesc& R, const json& j) {
  if (!j.is_array()) throw SchemaError("polynomial must be a coefficient array");
  std::vector<RingElem> c;
  for (const auto& x : j) c.push_back(elem_from_json(R, x));
  return make_poly(R, std::move(c));
}

json vec_to_json(const RingDesc& R, const Vec& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(elem_to_json(R, x));
  return out;
}

Vec vec_from_json(const RingDesc& R, const json& j) {
  if (!j.is_array()) throw SchemaError("vector must be an array");
  Vec v;
  for (const auto& x : j) v.push_back(elem_from_json(R, x));
  return v;
}

json algebra_to_json(const AlgebraDesc& A) {
  const auto& R = A.base();
  if (A.shape() == AlgShape::Split)
    return {{"ring", R.to_string()}, {"shape", "split"}, {"d", A.degree()}, {"gram", matrix_to_json(R, A.gram())}};
  return {{"ring", R.to_string()},
          {"shape", "quaternion"},
          {"a", elem_to_json(R, A.qa())},
          {"b", elem_to_json(R, A.qb())},
          {"pivot", vec_to_json(R, A.pivot().entries())}};
}

AlgebraDesc algebra_from_json(const json& j) {
  const RingDesc R = ring_make(string_field(j, "ring"));
  const std::string shape = string_field(j, "shape");
  if (shape == "split") {
    Matrix gram = matrix_from_json(R, field(j, "gram"));
    if (j.contains("d") && field(j, "d").get<std::size_t>() != gram.rows()) throw SchemaError("d does not match gram");
    return AlgebraDesc::split(R, std::move(gram));
  }
  if (shape == "quaternion") {
    const Vec p = vec_from_json(R, field(j, "pivot"));
    if (p.size() != 4) throw SchemaError("pivot needs four coordinates");
    return AlgebraDesc::quaternion(R, elem_from_json(R, field(j, "a")), elem_from_json(R, field(j, "b")),
                                   {p[0], p[1], p[2], p[3]});
  }
  throw SchemaError("unknown algebra shape '" + shape + "'");
}

json lift_certificate_json(const AlgebraDesc& A, const LiftCertificate& cert) {
  json out = header("lift", A);
  out.update(lift_body(A, cert));
  return out;
}

LiftCertificate lift_certificate_from_json(const AlgebraDesc& A, const json& j) {
  const QuotientCtx ctx = quotient_ctx(A);
  LiftCertificate cert;
  const auto& targets = array_field(j, "targets");
  if (targets.size() != ctx.count()) throw SchemaError("lift certificate needs one target per residue");
  for (std::size_t i = 0; i < ctx.count(); ++i) {
    const auto& F = ctx.residues()[i].base();
    if (string_field(targets[i], "ring") != F.to_string()) throw SchemaError("target ring does not match residue");
    cert.targets.push_back(matrix_from_json(F, targets[i]));
  }
  cert.lifted = matrix_from_json(A.base(), field(j, "lifted"));
  cert.method = string_field(j, "method");
  if (cert.method != "hensel") throw SchemaError("unknown lift method '" + cert.method + "'");
  const auto& checks = field(j, "checks");
  cert.checks = {bool_field(checks, "isometry"), bool_field(checks, "nrd_one"), bool_field(checks, "residues")};
  return cert;
}

json norm_minus_one_json(const AlgebraDesc& A, const NormMinusOneWitness& w) {
  const auto& R = A.base();
  json out = header("norm_minus_one", A);
  out["u"] = matrix_to_json(R, w.u);
  out["anisotropic_vector"] = vec_to_json(R, w.x);
  out["charpoly"] = poly_to_json(R, w.charpoly);
  return out;
}

NormMinusOneWitness norm_minus_one_from_json(const AlgebraDesc& A, const json& j) {
  const auto& R = A.base();
  return {matrix_from_json(R, field(j, "u")), vec_from_json(R, field(j, "anisotropic_vector")),
          poly_from_json(R, field(j, "charpoly"))};
}

json split_certificate_json(const AlgebraDesc& A, const SplitCertificate& cert) {
  const auto& R = A.base();
  json out = header("split", A);
  out["input_u"] = matrix_to_json(R, cert.input_u);
  out["v"] = matrix_to_json(R, cert.v);
  out["lift"] = lift_body(A, cert.lift);
  out["f"] = poly_to_json(R, cert.f);
  out["g"] = poly_to_json(R, cert.g);
  out["r"] = poly_to_json(R, cert.r);
  out["alpha"] = elem_to_json(R, cert.alpha);
  out["e"] = matrix_to_json(R, cert.e);
  out["e_prime"] = matrix_to_json(R, cert.e_prime);
  json basis = json::array();
  for (const auto& b : cert.basis) basis.push_back(vec_to_json(R, b));
  out["basis"] = basis;
  out["iso_check"] = cert.iso_check;
  return out;
}

SplitCertificate split_certificate_from_json(const AlgebraDesc& A, const json& j) {
  const auto& R = A.base();
  SplitCertificate cert;
  cert.input_u = matrix_from_json(R, field(j, "input_u"));
  cert.v = matrix_from_json(R, field(j, "v"));
  cert.lift = lift_certificate_from_json(A, field(j, "lift"));
  cert.f = poly_from_json(R, field(j, "f"));
  cert.g = poly_from_json(R, field(j, "g"));
  cert.r = poly_from_json(R, field(j, "r"));
  cert.alpha = elem_from_json(R, field(j, "alpha"));
  cert.e = matrix_from_json(R, field(j, "e"));
  cert.e_prime = matrix_from_json(R, field(j, "e_prime"));
  for (const auto& b : array_field(j, "basis")) cert.basis.push_back(vec_from_json(R, b));
  cert.iso_check = bool_field(j, "iso_check");
  return cert;
}

json closure_json(const AlgebraDesc& A, const ClosureReport& report) {
  json out = header("closure", A);
  out["reflections"] = report.reflections;
  out["orthogonal"] = report.orthogonal;
  out["special"] = report.special;
  out["missing"] = report.missing;
  out["contains_so"] = report.contains_so;
  json group = json::array();
  for (const auto& g : report.group) group.push_back(matrix_to_json(A.base(), g));
  out["group"] = group;
  return out;
}

json quaternion_probe_json(const AlgebraDesc& A, const QuaternionProbe& probe) {
  const auto& R = A.base();
  json out = header("quaternion_probe", A);
  out["bound"] = probe.bound;
  out["candidates"] = probe.candidates;
  out["isometry_count"] = probe.isometries.size();
  json sample = json::array();
  for (const auto& x : probe.isometries) sample.push_back(vec_to_json(R, x.entries()));
  out["isometries"] = sample;
  out["all_nrd_one"] = probe.all_nrd_one;
  out["minus_one"] = probe.minus_one ? vec_to_json(R, probe.minus_one->entries()) : json(nullptr);
  out["conclusion"] = probe.conclusion;
  return out;
}

json ideal_audit_json(const IdealAudit& audit, std::uint64_t seed) {
  const RingDesc order = ring_make(audit.order);
  json ids = json::array();
  for (const auto& id : audit.identities)
    ids.push_back({{"name", id.name}, {"lhs", id.lhs}, {"combination", id.combination}, {"verified", id.verified}});
  return {{"schema", kSchema},
          {"kind", "ideal_audit"},
          {"order", audit.order},
          {"L", {{"gens", audit.L_gens}}},
          {"principal", audit.principality.principal},
          {"generator", audit.principality.generator ? elem_to_json(order, *audit.principality.generator) : json(nullptr)},
          {"lattice_points", audit.principality.lattice_points},
          {"verdict", audit.verdict},
          {"structural_identities", ids},
          {"consequence", audit.consequence},
          {"witness", audit.witness ? matrix_to_json(order, *audit.witness) : json(nullptr)},
          {"seed", seed}};
}

Revalidation revalidate(const json& cert) {
  Revalidation out;
  try {
    if (string_field(cert, "schema") != kSchema) throw SchemaError("unsupported schema version");
    out.kind = string_field(cert, "kind");
    if (out.kind == "lift") {
      revalidate_lift(cert);
    } else if (out.kind == "norm_minus_one") {
      const AlgebraDesc A = algebra_from_json(field(cert, "algebra"));
      verify_norm_minus_one(A, norm_minus_one_from_json(A, cert));
    } else if (out.kind == "split") {
      const AlgebraDesc A = algebra_from_json(field(cert, "algebra"));
      verify_split(A, split_certificate_from_json(A, cert));
    } else if (out.kind == "closure") {
      revalidate_closure(cert);
    } else if (out.kind == "quaternion_probe") {
      revalidate_probe(cert);
    } else if (out.kind == "ideal_audit") {
      revalidate_audit(cert);
    } else {
      throw SchemaError("unknown certificate kind '" + out.kind + "'");
    }
    out.valid = true;
  } catch (const IdentityViolation& e) {
    out.violated = e.identity();
    out.detail = e.what();
  } catch (const SchemaError& e) {
    out.schema_error = true;
    out.violated = "schema";
    out.detail = e.what();
  } catch (const json::exception& e) {
    out.schema_error = true;
    out.violated = "schema";
    out.detail = e.what();
  } catch (const ParseError& e) {
    out.schema_error = true;
    out.violated = "schema";
    out.detail = e.what();
  } catch (const InvalidParameter& e) {
    out.schema_error = true;
    out.violated = "schema";
    out.detail = e.what();
  } catch (const DomainError& e) {
    out.schema_error = true;
    out.violated = "schema";
    out.detail = e.what();
  }
  return out;
}

}  // namespace orthcert
