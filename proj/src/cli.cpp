#include "orthcert/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "orthcert/certificates.hpp"
#include "orthcert/errors.hpp"

namespace orthcert {

namespace {

struct Options {
  std::string ring, gram = "I", targets, order, L, in, out, u;
  std::size_t d = 2;
  std::uint64_t seed = 0;
  std::uint64_t budget = EnumBudget{}.elements;
  std::string a = "-1", b = "-1", pivot = "0,1,0,0";
  int bound = 3;
};

// Inline JSON when the text starts with '[' or '{', otherwise a file path.
json load_json(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) return json::parse(text);
  std::ifstream file(text);
  if (!file) throw ParseError("cannot open JSON file", text);
  return json::parse(file);
}

Matrix make_gram(const RingDesc& R, const Options& o, std::mt19937_64& rng) {
  if (o.d == 0) throw InvalidParameter("--d must be positive");
  if (o.gram == "I") return identity(R, o.d);
  if (o.gram == "random") return random_unimodular_gram(R, o.d, rng);
  Matrix g = matrix_from_json(R, load_json(o.gram));
  if (g.rows() != o.d) throw InvalidParameter("--gram does not have size --d");
  return g;
}

AlgebraDesc make_split(const Options& o, std::mt19937_64& rng) {
  const RingDesc R = ring_make(o.ring);
  return AlgebraDesc::split(R, make_gram(R, o, rng));
}

void emit(const json& j, const Options& o, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw ParseError("cannot write output file", o.out);
  file << text;
}

int cmd_closure(const Options& o, std::ostream& out) {
  std::mt19937_64 rng(o.seed);
  const AlgebraDesc A = make_split(o, rng);
  EnumBudget budget;
  budget.elements = o.budget;
  const auto report = reflection_closure(A, budget);
  json j = closure_json(A, report);
  j["seed"] = o.seed;
  emit(j, o, out);
  return report.contains_so ? kExitOk : kExitViolation;
}

int cmd_lift(const Options& o, std::ostream& out) {
  std::mt19937_64 rng(o.seed);
  const AlgebraDesc A = make_split(o, rng);
  const QuotientCtx ctx = quotient_ctx(A);
  std::vector<AlgElem> targets;
  if (o.targets.empty()) {
    for (const auto& Ai : ctx.residues()) targets.push_back(random_special_orthogonal(Ai, rng));
  } else {
    const json t = load_json(o.targets);
    const json& list = t.is_object() ? t.at("targets") : t;
    if (!list.is_array() || list.size() != ctx.count())
      throw InvalidParameter("--targets needs one matrix per residue (" + std::to_string(ctx.count()) + ")");
    for (std::size_t i = 0; i < ctx.count(); ++i)
      targets.push_back(matrix_from_json(ctx.residues()[i].base(), list[i]));
  }
  json j = lift_certificate_json(A, lift_so(A, targets));
  j["seed"] = o.seed;
  emit(j, o, out);
  return kExitOk;
}

int cmd_norm_minus_one(const Options& o, std::ostream& out) {
  std::mt19937_64 rng(o.seed);
  const AlgebraDesc A = make_split(o, rng);
  json j = norm_minus_one_json(A, norm_minus_one(A));
  j["seed"] = o.seed;
  emit(j, o, out);
  return kExitOk;
}

int cmd_split(const Options& o, std::ostream& out) {
  std::mt19937_64 rng(o.seed);
  const AlgebraDesc A = make_split(o, rng);
  AlgElem u;
  if (o.u.empty()) {
    // Norm -1 witness composed with random special orthogonal elements.
    u = A.mul(random_special_orthogonal(A, rng), A.mul(norm_minus_one(A).u, random_special_orthogonal(A, rng)));
  } else {
    u = matrix_from_json(A.base(), load_json(o.u));
  }
  json j = split_certificate_json(A, split_certificate(A, u));
  j["seed"] = o.seed;
  emit(j, o, out);
  return kExitOk;
}

int cmd_probe(const Options& o, std::ostream& out) {
  const RingDesc R = ring_make(o.ring.empty() ? "Q" : o.ring);
  std::vector<RingElem> p;
  std::stringstream ss(o.pivot);
  for (std::string part; std::getline(ss, part, ',');) p.push_back(R.parse_elem(part));
  if (p.size() != 4) throw ParseError("--pivot needs four comma-separated coordinates", o.pivot);
  const AlgebraDesc A = AlgebraDesc::quaternion(R, R.parse_elem(o.a), R.parse_elem(o.b), {p[0], p[1], p[2], p[3]});
  json j = quaternion_probe_json(A, quaternion_probe(A, o.bound));
  j["seed"] = o.seed;
  emit(j, o, out);
  return kExitOk;
}

int cmd_audit(const Options& o, std::ostream& out) {
  const RingDesc order = ring_make(o.order);
  std::mt19937_64 rng(o.seed);
  const IdealAlgebra A = build_ideal_algebra(parse_ideal(order, o.L), rng);
  emit(ideal_audit_json(audit_no_norm_minus_one(A), o.seed), o, out);
  return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  json cert;
  try {
    cert = load_json(o.in);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("unreadable certificate: ") + e.what());
  }
  const Revalidation r = revalidate(cert);
  json j{{"schema", kSchema}, {"kind", "check"}, {"certificate_kind", r.kind}, {"valid", r.valid}};
  if (!r.valid) {
    j["violated"] = r.violated;
    j["detail"] = r.detail;
  }
  emit(j, o, out);
  if (r.valid) return kExitOk;
  return r.schema_error ? kExitUsage : kExitViolation;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact certificates for orthogonal groups of Azumaya algebras", "orthcert"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Seed of the deterministic generator")->default_val(0);
    sub->add_option("--out", o.out, "Write JSON here instead of standard output");
  };
  auto add_algebra = [&](CLI::App* sub) {
    sub->add_option("--ring", o.ring, "Base ring, e.g. Z/225 or GF(3^1)")->required();
    sub->add_option("--d", o.d, "Degree")->default_val(2);
    sub->add_option("--gram", o.gram, "I, random, a JSON file or inline JSON")->default_val("I");
    add_common(sub);
  };

  auto* closure = app.add_subcommand("closure", "Reflection closure versus exhaustive SO");
  add_algebra(closure);
  closure->add_option("--budget", o.budget, "Element budget")->default_val(EnumBudget{}.elements);
  auto* lift = app.add_subcommand("lift", "Lift residue SO targets to an exact SO element");
  add_algebra(lift);
  lift->add_option("--targets", o.targets, "JSON file or inline JSON: one matrix per residue");
  auto* n1 = app.add_subcommand("norm-minus-one", "Isometry of reduced norm -1");
  add_algebra(n1);
  auto* split = app.add_subcommand("split", "Idempotent splitting certificate");
  add_algebra(split);
  split->add_option("--u", o.u, "Isometry of reduced norm -1 (JSON file or inline); random if absent");
  auto* probe = app.add_subcommand("probe-quaternion", "Bounded isometry search in a quaternion algebra");
  probe->add_option("--ring", o.ring, "Base field")->default_val("Q");
  probe->add_option("--a", o.a, "i^2")->default_val("-1");
  probe->add_option("--b", o.b, "j^2")->default_val("-1");
  probe->add_option("--pivot", o.pivot, "Pivot coordinates on 1,i,j,k")->default_val("0,1,0,0");
  probe->add_option("--bound", o.bound, "Height bound")->default_val(3);
  add_common(probe);
  auto* audit = app.add_subcommand("audit-ideal", "Norm -1 audit of the ideal algebra [[R, L^-1], [L, R]]");
  audit->add_option("--order", o.order, "Quadratic order, e.g. Zsqrt[-5]")->required();
  audit->add_option("--L", o.L, "Generators of L, e.g. 2,1+w")->required();
  add_common(audit);
  auto* check = app.add_subcommand("check", "Revalidate a certificate without searching");
  check->add_option("--in", o.in, "Certificate file or inline JSON")->required();
  add_common(check);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*closure) return cmd_closure(o, out);
    if (*lift) return cmd_lift(o, out);
    if (*n1) return cmd_norm_minus_one(o, out);
    if (*split) return cmd_split(o, out);
    if (*probe) return cmd_probe(o, out);
    if (*audit) return cmd_audit(o, out);
    if (*check) return cmd_check(o, out);
  } catch (const IdentityViolation& e) {
    err << "violated " << e.identity() << ": " << e.what() << "\n";
    return kExitViolation;
  } catch (const BudgetExceeded& e) {
    err << "budget: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "json: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace orthcert
