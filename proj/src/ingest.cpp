#include "eigentrilat/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <sstream>
#include <unordered_map>

#include "eigentrilat/weights.hpp"

namespace eigentrilat {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  return out;
}

double parse_number(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidArgument,
         std::string("could not parse ") + what + ": '" + s + "'");
  }
}

}  // namespace

PathLossFit calibrate_pathloss(
    const std::vector<std::pair<double, double>>& records) {
  if (records.size() < 2) {
    fail(ErrorCode::InsufficientData,
         "path loss calibration needs at least two records");
  }
  const Eigen::Index m = static_cast<Eigen::Index>(records.size());
  Mat B(m, 2);
  Vec rhs(m);
  double lg_min = std::numeric_limits<double>::infinity();
  double lg_max = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& [dist, rss] = records[i];
    if (!std::isfinite(dist) || dist <= 0.0 || !std::isfinite(rss)) {
      fail(ErrorCode::InvalidArgument,
           "calibration distances must be positive and finite");
    }
    const double lg = std::log10(dist);
    lg_min = std::min(lg_min, lg);
    lg_max = std::max(lg_max, lg);
    B(i, 0) = 1.0;
    B(i, 1) = -10.0 * lg;
    rhs[i] = rss;
  }
  if (lg_max - lg_min < 1e-12) {
    fail(ErrorCode::DegenerateFit,
         "calibration needs at least two distinct distances");
  }
  const Vec sol = B.colPivHouseholderQr().solve(rhs);
  return {sol[0], sol[1]};
}

TrilaterationProblem build_problem(const std::vector<MeasurementRecord>& meas,
                                   const std::vector<AnchorParams>& anchors,
                                   double sigma_rss, double sigma_rtt) {
  if (meas.empty()) {
    fail(ErrorCode::EmptyProblem, "no measurements to build a problem from");
  }
  if (!(sigma_rss > 0.0) || !(sigma_rtt > 0.0)) {
    fail(ErrorCode::NonPositiveWeights, "sigma_rss and sigma_rtt must be > 0");
  }
  std::unordered_map<std::string, const AnchorParams*> registry;
  for (const AnchorParams& a : anchors) registry[a.id] = &a;

  Eigen::Index dim = -1;
  const Eigen::Index m = static_cast<Eigen::Index>(meas.size());
  std::vector<const AnchorParams*> row_anchor(m);
  Vec d(m);
  std::vector<Eigen::Index> rss_rows;
  std::vector<Eigen::Index> rtt_rows;

  for (Eigen::Index i = 0; i < m; ++i) {
    const MeasurementRecord& rec = meas[i];
    const auto it = registry.find(rec.anchor_id);
    if (it == registry.end()) {
      fail(ErrorCode::UnknownAnchor, "unknown anchor '" + rec.anchor_id + "'");
    }
    const AnchorParams* a = it->second;
    if (dim < 0) {
      dim = a->position.size();
    } else if (a->position.size() != dim) {
      fail(ErrorCode::DimensionMismatch,
           "anchor positions disagree on dimension");
    }
    row_anchor[i] = a;
    if (rec.kind == MeasurementKind::Rss) {
      if (!(a->eta > 0.0)) {
        fail(ErrorCode::NonPositiveWeights,
             "anchor '" + a->id + "' has nonpositive eta");
      }
      d[i] = std::sqrt(rss_to_distance_squared(rec.value, a->c0, a->eta));
      rss_rows.push_back(i);
    } else {
      if (rec.value < 0.0 || !std::isfinite(rec.value)) {
        fail(ErrorCode::NonFiniteInput, "rtt distance must be nonnegative");
      }
      d[i] = rec.value;
      rtt_rows.push_back(i);
    }
  }
  d = clamp_distances(d);

  TrilaterationProblem p;
  p.dim = static_cast<int>(dim);
  p.senders.resize(dim, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    p.senders.col(i) = row_anchor[i]->position;
  }
  p.distances = d;

  Vec w(m);
  if (!rtt_rows.empty()) {
    Vec dr(static_cast<Eigen::Index>(rtt_rows.size()));
    for (std::size_t k = 0; k < rtt_rows.size(); ++k) dr[k] = d[rtt_rows[k]];
    const WeightMatrix wr =
        weights_toa(dr, Vec::Constant(dr.size(), sigma_rtt));
    for (std::size_t k = 0; k < rtt_rows.size(); ++k) {
      w[rtt_rows[k]] = wr.diag()[k];
    }
  }
  if (!rss_rows.empty()) {
    Vec d2(static_cast<Eigen::Index>(rss_rows.size()));
    Vec eta(d2.size());
    for (std::size_t k = 0; k < rss_rows.size(); ++k) {
      d2[k] = d[rss_rows[k]] * d[rss_rows[k]];
      eta[k] = row_anchor[rss_rows[k]]->eta;
    }
    const WeightMatrix ws = weights_rss(d2, eta, sigma_rss);
    for (std::size_t k = 0; k < rss_rows.size(); ++k) {
      w[rss_rows[k]] = ws.diag()[k];
    }
  }
  p.weights = WeightMatrix::Diagonal(w);
  return p;
}

std::vector<MeasurementRecord> load_measurements_csv(std::istream& in) {
  std::vector<MeasurementRecord> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (first && fields.size() == 3 && lower(fields[0]) == "anchor_id") {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != 3) {
      fail(ErrorCode::InvalidArgument,
           "measurement rows need anchor_id,kind,value: '" + line + "'");
    }
    MeasurementRecord rec;
    rec.anchor_id = fields[0];
    const std::string kind = lower(fields[1]);
    if (kind == "rss") {
      rec.kind = MeasurementKind::Rss;
    } else if (kind == "rtt") {
      rec.kind = MeasurementKind::Rtt;
    } else {
      fail(ErrorCode::InvalidArgument,
           "measurement kind must be rss or rtt, got '" + fields[1] + "'");
    }
    rec.value = parse_number(fields[2], "measurement value");
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<std::pair<double, double>> load_calibration_csv(std::istream& in) {
  std::vector<std::pair<double, double>> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (first && fields.size() == 2 && lower(fields[0]) == "distance") {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != 2) {
      fail(ErrorCode::InvalidArgument,
           "calibration rows need distance,rss_dbm: '" + line + "'");
    }
    out.emplace_back(parse_number(fields[0], "distance"),
                     parse_number(fields[1], "rss_dbm"));
  }
  return out;
}

}  // namespace eigentrilat
