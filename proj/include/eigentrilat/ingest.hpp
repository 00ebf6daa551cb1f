#ifndef EIGENTRILAT_INGEST_HPP
#define EIGENTRILAT_INGEST_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "eigentrilat/types.hpp"

namespace eigentrilat {

// One radio anchor with its log-distance path loss parameters.
struct AnchorParams {
  std::string id;
  Vec position;
  double eta = 2.0;   // path-loss exponent
  double c0 = -40.0;  // dBm at unit distance
};

enum class MeasurementKind { Rss, Rtt };

struct MeasurementRecord {
  std::string anchor_id;
  MeasurementKind kind = MeasurementKind::Rtt;
  double value = 0.0;  // dBm for Rss, meters for Rtt
};

struct PathLossFit {
  double c0 = 0.0;
  double eta = 0.0;
};

constexpr double kDefaultSigmaRss = 5.0;  // dBm
constexpr double kDefaultSigmaRtt = 1.0;  // meters

// Least-squares fit of C = c0 - 10 eta log10(dist) on (distance, rss_dbm)
// pairs. Needs at least two records and at least two distinct distances.
PathLossFit calibrate_pathloss(
    const std::vector<std::pair<double, double>>& records);

// Assembles a weighted problem from measurements against the registry.
// Rss readings turn into distances through the path loss model of their
// anchor; each record becomes one problem row, so an anchor heard several
// times contributes several independent rows.
TrilaterationProblem build_problem(const std::vector<MeasurementRecord>& meas,
                                   const std::vector<AnchorParams>& anchors,
                                   double sigma_rss = kDefaultSigmaRss,
                                   double sigma_rtt = kDefaultSigmaRtt);

// CSV with columns anchor_id,kind,value; a leading header row is skipped.
std::vector<MeasurementRecord> load_measurements_csv(std::istream& in);

// CSV with columns distance,rss_dbm; a leading header row is skipped.
std::vector<std::pair<double, double>> load_calibration_csv(std::istream& in);

}  // namespace eigentrilat

#endif
