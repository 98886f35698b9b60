#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "heisflow/config.hpp"
#include "heisflow/decompose.hpp"
#include "heisflow/lift.hpp"

namespace heis::io {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// All numeric output uses 17 significant digits for reproducibility audits.
std::string fmt17(double v);

// ---- readers (throw ParseError with a field diagnostic) ----
DiscreteCharge read_charge_json(const std::string& path,
                                std::vector<DivergenceAtom>* divergence_out = nullptr);
CurveMeasure read_measure_json(const std::string& path);
RunConfig read_config_json(const std::string& path);
std::vector<HPoint> read_points_json(const std::string& path, int n);

/// Point or the "inf" sentinel from an in-memory JSON string.
std::optional<HPoint> parse_point_or_infinity(const std::string& json_text, int n);
std::string point_or_infinity_to_json(const std::optional<HPoint>& p);

// ---- writers ----
void write_charge_json(std::ostream& os, const DiscreteCharge& mu,
                       const std::vector<DivergenceAtom>* divergence = nullptr);
void write_curve_json(std::ostream& os, const HorizontalCurve& c);
void write_config_json(std::ostream& os, const RunConfig& cfg);

/// Streaming writer for { "l": ..., "entries": [ {weight, curve}... ] }.
class MeasureWriter {
public:
    MeasureWriter(std::ostream& os, double l);
    void entry(double weight, const HorizontalCurve& c);
    void close();

private:
    std::ostream& os_;
    bool first_ = true;
    bool closed_ = false;
};

/// Trajectory CSV: t, x_1..x_n, y_1..y_n, z (header row included).  Decompose
/// output prefixes curve id and weight columns.
struct CsvCurveTag {
    long id;
    double weight;
};
void write_trajectory_csv_header(std::ostream& os, int n, bool curve_column);
void write_trajectory_csv_rows(std::ostream& os, const HorizontalCurve& c,
                               std::optional<CsvCurveTag> tag = std::nullopt);

struct ReportInputs {
    std::string pipeline;  // "solenoidal" | "general"
    VerifyReport verify;
    VerifyTolerances tol;
    double var_mu = 0;
    int hull_rank = 0;
    const GeneralDiagnostics* general = nullptr;  // optional
    const std::vector<EpsilonStage>* schedule = nullptr;  // optional
};
void write_report_json(std::ostream& os, const ReportInputs& in);

}  // namespace heis::io
