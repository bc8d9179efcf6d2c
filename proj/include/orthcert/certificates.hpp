#pragma once

#include <json.hpp>

#include <string>

#include "orthcert/brauer.hpp"
#include "orthcert/ideals.hpp"
#include "orthcert/isometry.hpp"

namespace orthcert {

using json = nlohmann::json;

inline constexpr const char* kSchema = "v1";

// Field encodings. Elements are canonical strings; decoding also accepts JSON integers.
json elem_to_json(const RingDesc& R, const RingElem& x);
RingElem elem_from_json(const RingDesc& R, const json& j);
json matrix_to_json(const RingDesc& R, const Matrix& m);
Matrix matrix_from_json(const RingDesc& R, const json& j);
json poly_to_json(const RingDesc& R, const Poly& f);
Poly poly_from_json(const RingDesc& R, const json& j);
json vec_to_json(const RingDesc& R, const Vec& v);
Vec vec_from_json(const RingDesc& R, const json& j);
json algebra_to_json(const AlgebraDesc& A);
AlgebraDesc algebra_from_json(const json& j);

// One emitter and one decoder per certificate kind. Decoders throw SchemaError on malformed input.
json lift_certificate_json(const AlgebraDesc& A, const LiftCertificate& cert);
LiftCertificate lift_certificate_from_json(const AlgebraDesc& A, const json& j);
json norm_minus_one_json(const AlgebraDesc& A, const NormMinusOneWitness& w);
NormMinusOneWitness norm_minus_one_from_json(const AlgebraDesc& A, const json& j);
json split_certificate_json(const AlgebraDesc& A, const SplitCertificate& cert);
SplitCertificate split_certificate_from_json(const AlgebraDesc& A, const json& j);
json closure_json(const AlgebraDesc& A, const ClosureReport& report);
json quaternion_probe_json(const AlgebraDesc& A, const QuaternionProbe& probe);
json ideal_audit_json(const IdealAudit& audit, std::uint64_t seed);

struct Revalidation {
  bool valid = false;
  std::string kind;
  std::string violated;  // identity name, or "schema"
  std::string detail;
  bool schema_error = false;
};

/// Re-derives every identity recorded in a certificate with ring and algebra arithmetic only.
/// Searches are never re-run, except the finite norm-ellipse search behind a non-principal ideal.
Revalidation revalidate(const json& cert);

}  // namespace orthcert
