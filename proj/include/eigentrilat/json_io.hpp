#ifndef EIGENTRILAT_JSON_IO_HPP
#define EIGENTRILAT_JSON_IO_HPP

#include "json.hpp"

#include "eigentrilat/bench.hpp"
#include "eigentrilat/ingest.hpp"
#include "eigentrilat/types.hpp"
#include "eigentrilat/weights.hpp"

namespace eigentrilat {

using Json = nlohmann::json;

// Problem schema:
//   {"dim": n, "senders": [[...n floats...] x m], "distances": [m floats],
//    "weights": {"diag": [...]} | {"full": [[...]]} | "unit"}
// A missing "weights" key means "unit".
Json problem_to_json(const TrilaterationProblem& p);
TrilaterationProblem problem_from_json(const Json& j);

// Solution schema:
//   {"kind": "unique"|"pair"|"sphere"|"ill_defined", "points": [[...]],
//    "lambda": x, "cost": x, "sphere": {"center": [...], "radius": x}?}
// The sphere key appears only for spherical solution sets.
Json solution_to_json(const SolutionSet& s);

// Noise fragments: {"model":"toa","sigma":x|[...]} |
// {"model":"rss","sigma_rss":x,"per_sender":[{"eta":x,"c0":x},...]} |
// {"model":"unit"}. measurement_count broadcasts a scalar toa sigma; pass
// the problem's m.
Json noise_model_to_json(const NoiseModel& model);
NoiseModel noise_model_from_json(const Json& j,
                                 Eigen::Index measurement_count = -1);

// Anchor registry: [{"id": "...", "pos": [...], "eta": x, "c0": x}, ...]
std::vector<AnchorParams> anchors_from_json(const Json& j);
Json anchors_to_json(const std::vector<AnchorParams>& anchors);

Json noise_report_to_json(const NoiseReport& r);
Json degen_report_to_json(const DegenReport& r);
Json timing_report_to_json(const TimingReport& r);

}  // namespace eigentrilat

#endif
