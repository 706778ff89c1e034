#pragma once

#include <string>

#include "json.hpp"
#include "rbmo/covering.hpp"
#include "rbmo/dominating.hpp"
#include "rbmo/johnnirenberg.hpp"
#include "rbmo/operators.hpp"
#include "rbmo/rbmo.hpp"
#include "rbmo/space.hpp"

namespace rbmo {

using json = nlohmann::json;

/// Space document: {"coords": [[..]]|null, "dist": [[..]]|null,
/// "weights": [..], "metric": "euclidean"|"matrix", "points": [names]?}
Space load_space(const json& doc);
Space load_space_file(const std::string& path);
json space_to_json(const Space& space);

/// {"variant": "power"|"ballmeasure"|"envelope", ...}. BallMeasure and
/// Envelope need the space to rebuild their tables.
json lambda_to_json(const DominatingFunction& lambda);
DominatingFunction lambda_from_json(const Space& space, const json& doc);
/// CLI shorthand: "power:C:d", "ballmeasure", "envelope:CL", "fit:d".
DominatingFunction lambda_from_spec(const Space& space, const std::string& spec);

json diagnostics_to_json(const Space& space, const DoublingDiagnostics& diag);
json upper_doubling_to_json(const UpperDoublingReport& rep);
json weak_type_to_json(const WeakTypeReport& rep);
json family_to_json(const RBMOProblem& problem, const AdmissibleFamily& family);
AdmissibleFamily family_from_json(const RBMOProblem& problem, const json& doc);
json compare_rho_to_json(const CompareRhoReport& rep);
json compare_bmo_to_json(const CompareBmoReport& rep);
json section5_to_json(const Section5Report& rep);
json jn_report_to_json(const Space& space, const JNReport& rep);

std::string canonical_table_csv(const Space& space, const CanonicalFamily& family);
std::string maximal_profile_csv(const Space& space, const MaximalProfile& prof);
std::string slack_table_csv(const RBMOProblem& problem, const AdmissibleFamily& family);
std::string kernel_table_csv(const RBMOProblem& problem);
std::string tail_curve_csv(const JNReport& rep);
std::string tail_gnuplot_script(const std::string& csv_name, const std::string& out_name);

void write_text_file(const std::string& path, const std::string& content);
std::string dump_json(const json& j);  // stable 2-space indent, trailing newline

}  // namespace rbmo
