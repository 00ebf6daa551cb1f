#include "eigentrilat/json_io.hpp"

#include <cmath>

namespace eigentrilat {

namespace {

Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const Json& j, const char* what) {
  if (!j.is_array()) {
    fail(ErrorCode::InvalidArgument, std::string(what) + " must be an array");
  }
  Vec v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const Json& x : j) {
    if (!x.is_number()) {
      fail(ErrorCode::InvalidArgument,
           std::string(what) + " must hold numbers");
    }
    v[i++] = x.get<double>();
  }
  return v;
}

// Doubles that are NaN serialize to null; the schema uses that for
// ill-defined results with no meaningful cost.
Json finite_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace

Json problem_to_json(const TrilaterationProblem& p) {
  Json j;
  j["dim"] = p.dim;
  Json senders = Json::array();
  for (Eigen::Index c = 0; c < p.senders.cols(); ++c) {
    senders.push_back(vec_to_json(p.senders.col(c)));
  }
  j["senders"] = senders;
  j["distances"] = vec_to_json(p.distances);
  if (p.weights.diagonal()) {
    bool unit = true;
    for (Eigen::Index i = 0; i < p.weights.diag().size(); ++i) {
      if (p.weights.diag()[i] != 1.0) {
        unit = false;
        break;
      }
    }
    if (unit) {
      j["weights"] = "unit";
    } else {
      j["weights"] = Json{{"diag", vec_to_json(p.weights.diag())}};
    }
  } else {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < p.weights.full().rows(); ++r) {
      rows.push_back(vec_to_json(p.weights.full().row(r)));
    }
    j["weights"] = Json{{"full", rows}};
  }
  return j;
}

TrilaterationProblem problem_from_json(const Json& j) {
  if (!j.is_object()) {
    fail(ErrorCode::InvalidArgument, "problem must be a JSON object");
  }
  if (!j.contains("dim") || !j["dim"].is_number_integer()) {
    fail(ErrorCode::InvalidArgument, "problem needs an integer 'dim'");
  }
  if (!j.contains("senders") || !j["senders"].is_array()) {
    fail(ErrorCode::InvalidArgument, "problem needs a 'senders' array");
  }
  if (!j.contains("distances")) {
    fail(ErrorCode::InvalidArgument, "problem needs a 'distances' array");
  }
  TrilaterationProblem p;
  p.dim = j["dim"].get<int>();
  if (p.dim < 1) {
    fail(ErrorCode::InvalidArgument, "dim must be at least 1");
  }
  const Json& senders = j["senders"];
  const Eigen::Index m = static_cast<Eigen::Index>(senders.size());
  p.senders.resize(p.dim, m);
  Eigen::Index c = 0;
  for (const Json& s : senders) {
    const Vec col = vec_from_json(s, "sender");
    if (col.size() != p.dim) {
      fail(ErrorCode::InvalidArgument, "sender rows must have dim entries");
    }
    p.senders.col(c++) = col;
  }
  p.distances = vec_from_json(j["distances"], "distances");
  if (p.distances.size() != m) {
    fail(ErrorCode::InvalidArgument,
         "distances must have one entry per sender");
  }

  if (!j.contains("weights") || (j["weights"].is_string() &&
                                 j["weights"].get<std::string>() == "unit")) {
    p.weights = WeightMatrix::Unit(m);
    return p;
  }
  const Json& w = j["weights"];
  if (w.is_object() && w.contains("diag")) {
    p.weights = WeightMatrix::Diagonal(vec_from_json(w["diag"], "diag"));
    if (p.weights.size() != m) {
      fail(ErrorCode::InvalidArgument, "diag weights must have m entries");
    }
    return p;
  }
  if (w.is_object() && w.contains("full")) {
    const Json& rows = w["full"];
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != m) {
      fail(ErrorCode::InvalidArgument, "full weights must be m rows");
    }
    Mat W(m, m);
    Eigen::Index r = 0;
    for (const Json& row : rows) {
      const Vec rv = vec_from_json(row, "weight row");
      if (rv.size() != m) {
        fail(ErrorCode::InvalidArgument, "full weights must be m by m");
      }
      W.row(r++) = rv;
    }
    p.weights = WeightMatrix::Full(W);
    return p;
  }
  fail(ErrorCode::InvalidArgument,
       "weights must be \"unit\", {\"diag\": [...]}, or {\"full\": [[...]]}");
}

Json solution_to_json(const SolutionSet& s) {
  Json j;
  switch (s.kind) {
    case SolutionKind::Unique:
      j["kind"] = "unique";
      break;
    case SolutionKind::Pair:
      j["kind"] = "pair";
      break;
    case SolutionKind::Sphere:
      j["kind"] = "sphere";
      break;
    case SolutionKind::IllDefined:
      j["kind"] = "ill_defined";
      break;
  }
  Json points = Json::array();
  for (const Vec& x : s.points) points.push_back(vec_to_json(x));
  j["points"] = points;
  j["lambda"] = finite_or_null(s.lambda);
  j["cost"] = finite_or_null(s.cost);
  if (s.sphere) {
    j["sphere"] = Json{{"center", vec_to_json(s.sphere->center)},
                       {"radius", s.sphere->radius}};
  }
  return j;
}

Json noise_model_to_json(const NoiseModel& model) {
  if (std::holds_alternative<UnitNoise>(model)) {
    return Json{{"model", "unit"}};
  }
  if (const auto* g = std::get_if<GaussianDistanceNoise>(&model)) {
    bool shared = g->sigma.size() > 0;
    for (Eigen::Index i = 1; i < g->sigma.size(); ++i) {
      if (g->sigma[i] != g->sigma[0]) {
        shared = false;
        break;
      }
    }
    Json j{{"model", "toa"}};
    j["sigma"] = shared ? Json(g->sigma[0]) : vec_to_json(g->sigma);
    return j;
  }
  if (const auto* r = std::get_if<LogNormalRssNoise>(&model)) {
    Json per = Json::array();
    for (Eigen::Index i = 0; i < r->eta.size(); ++i) {
      per.push_back(Json{{"eta", r->eta[i]}, {"c0", r->c0[i]}});
    }
    return Json{{"model", "rss"}, {"sigma_rss", r->sigma_rss},
                {"per_sender", per}};
  }
  fail(ErrorCode::InvalidArgument,
       "custom transforms have no JSON form; pass weights explicitly");
}

NoiseModel noise_model_from_json(const Json& j, Eigen::Index m) {
  if (!j.is_object() || !j.contains("model") || !j["model"].is_string()) {
    fail(ErrorCode::InvalidArgument, "noise fragment needs a 'model' string");
  }
  const std::string model = j["model"].get<std::string>();
  if (model == "unit") {
    return UnitNoise{};
  }
  if (model == "toa") {
    if (!j.contains("sigma")) {
      fail(ErrorCode::InvalidArgument, "toa noise needs 'sigma'");
    }
    GaussianDistanceNoise g;
    if (j["sigma"].is_number()) {
      if (m < 1) {
        fail(ErrorCode::InvalidArgument,
             "scalar sigma needs a measurement count to broadcast to");
      }
      g.sigma = Vec::Constant(m, j["sigma"].get<double>());
    } else {
      g.sigma = vec_from_json(j["sigma"], "sigma");
    }
    return g;
  }
  if (model == "rss") {
    if (!j.contains("sigma_rss") || !j["sigma_rss"].is_number() ||
        !j.contains("per_sender") || !j["per_sender"].is_array()) {
      fail(ErrorCode::InvalidArgument,
           "rss noise needs 'sigma_rss' and 'per_sender'");
    }
    LogNormalRssNoise r;
    r.sigma_rss = j["sigma_rss"].get<double>();
    const Json& per = j["per_sender"];
    r.eta.resize(static_cast<Eigen::Index>(per.size()));
    r.c0.resize(r.eta.size());
    Eigen::Index i = 0;
    for (const Json& e : per) {
      if (!e.is_object() || !e.contains("eta") || !e.contains("c0")) {
        fail(ErrorCode::InvalidArgument,
             "per_sender entries need 'eta' and 'c0'");
      }
      r.eta[i] = e["eta"].get<double>();
      r.c0[i] = e["c0"].get<double>();
      ++i;
    }
    return r;
  }
  fail(ErrorCode::InvalidArgument, "unknown noise model '" + model + "'");
}

std::vector<AnchorParams> anchors_from_json(const Json& j) {
  if (!j.is_array()) {
    fail(ErrorCode::InvalidArgument, "anchor registry must be an array");
  }
  std::vector<AnchorParams> out;
  out.reserve(j.size());
  for (const Json& e : j) {
    if (!e.is_object() || !e.contains("id") || !e["id"].is_string() ||
        !e.contains("pos")) {
      fail(ErrorCode::InvalidArgument, "anchors need 'id' and 'pos'");
    }
    AnchorParams a;
    a.id = e["id"].get<std::string>();
    a.position = vec_from_json(e["pos"], "anchor pos");
    if (e.contains("eta")) a.eta = e["eta"].get<double>();
    if (e.contains("c0")) a.c0 = e["c0"].get<double>();
    out.push_back(std::move(a));
  }
  return out;
}

Json anchors_to_json(const std::vector<AnchorParams>& anchors) {
  Json j = Json::array();
  for (const AnchorParams& a : anchors) {
    j.push_back(Json{{"id", a.id},
                     {"pos", vec_to_json(a.position)},
                     {"eta", a.eta},
                     {"c0", a.c0}});
  }
  return j;
}

Json noise_report_to_json(const NoiseReport& r) {
  Json rows = Json::array();
  for (const NoiseRow& row : r.rows) {
    rows.push_back(Json{{"sigma", row.sigma},
                        {"solver", to_string(row.solver)},
                        {"mean", row.mean},
                        {"median", row.median},
                        {"q1", row.q1},
                        {"q3", row.q3}});
  }
  return Json{{"experiment", "noise"}, {"dim", r.dim},      {"m", r.m},
              {"trials", r.trials},    {"seed", r.seed},
              {"ml_init", "proposed"}, {"rows", rows}};
}

Json degen_report_to_json(const DegenReport& r) {
  Json rows = Json::array();
  for (const DegenRow& row : r.rows) {
    rows.push_back(Json{{"scale", row.scale},
                        {"solver", to_string(row.solver)},
                        {"median_error", row.median_error},
                        {"success_rate", row.success_rate}});
  }
  return Json{{"experiment", "degen"},
              {"trials", r.trials},
              {"seed", r.seed},
              {"rows", rows}};
}

Json timing_report_to_json(const TimingReport& r) {
  Json rows = Json::array();
  for (const TimingRow& row : r.rows) {
    rows.push_back(Json{{"m", row.m},
                        {"solver", to_string(row.solver)},
                        {"median_seconds", row.median_seconds}});
  }
  return Json{{"experiment", "timing"},
              {"reps", r.reps},
              {"seed", r.seed},
              {"rows", rows}};
}

}  // namespace eigentrilat
