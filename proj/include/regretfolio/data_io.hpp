#pragma once

// Dataset files, the synthetic regime generator, and result serialization
// (front CSVs, regret-report CSVs, SVG scatter plots).
//
// Dataset JSON:
//   { "version": "1",
//     "assets":  ["name", ...],
//     "mu":      [0.05, ...],
//     "regimes": [ { "label": "C", "stds": [...], "corr": [[...], ...] }, ... ] }

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "regretfolio/core_model.hpp"
#include "regretfolio/evaluation.hpp"
#include "regretfolio/pareto.hpp"
#include "regretfolio/robust.hpp"

namespace regretfolio {

inline constexpr std::string_view kDatasetVersion = "1";

struct RegimeData {
    std::string label;
    Vector stds;
    Matrix corr;
};

struct DatasetFile {
    std::string version{kDatasetVersion};
    std::vector<std::string> assets;
    Vector mu;
    std::vector<RegimeData> regimes;
};

struct Dataset {
    AssetUniverse universe;
    UncertaintySet scenarios;
};

/// Parses JSON text. ParseError carries line/column or the offending field.
DatasetFile parse_dataset(std::string_view json_text);
std::string dataset_to_json(const DatasetFile& file);

/// Builds validated domain objects. ValidationError names the invariant;
/// PsdError names the regime and its minimum eigenvalue.
Dataset validate_dataset(const DatasetFile& file);

Dataset load_dataset(const std::filesystem::path& path);
void write_dataset(const DatasetFile& file, const std::filesystem::path& path);

struct GeneratorSpec {
    std::uint64_t seed = 42;
    std::size_t n_assets = 15;
    std::pair<double, double> return_range{0.02, 0.11};
    std::pair<double, double> std_range{0.01, 0.15};
    std::pair<double, double> corr_crisis{0.6, 0.9};
    std::pair<double, double> corr_normal{0.3, 0.6};
    std::pair<double, double> corr_growth{0.0, 0.3};

    void validate() const;
};

/// Deterministic in the seed. Regimes C, N, G share the asset stds and differ
/// in correlation level.
DatasetFile generate_synthetic(const GeneratorSpec& spec);

/// Mean of the strictly upper triangle.
double mean_off_diagonal(const Matrix& m);

/// Symmetric eigenvalue clipping at `floor`, then rescaling back to a unit
/// diagonal.
Matrix repair_correlation(const Matrix& corr, double floor = 1e-6);

// --- CSV ---------------------------------------------------------------

/// One CSV row: target_return, return, risk_or_regret, argmax_scenario,
/// weight_1..weight_n.
struct FrontCsvRow {
    double target_return = 0.0;
    double ret = 0.0;
    double risk = 0.0;
    std::string argmax_scenario;
    Vector weights;
};

std::vector<FrontCsvRow> to_csv_rows(std::span<const FrontPoint> points);
std::vector<FrontCsvRow> to_csv_rows(std::span<const RobustFrontPoint> points);

/// Rows are written sorted by return; numbers with 10 significant digits.
void write_front_csv(std::vector<FrontCsvRow> rows, std::size_t n_assets,
                     const std::filesystem::path& path);
void write_front_csv(const ParetoFront& front, std::size_t n_assets, const std::filesystem::path& path);
void write_front_csv(std::span<const RobustFrontPoint> front, std::size_t n_assets,
                     const std::filesystem::path& path);

/// Reads a front CSV back; the weight count comes from the header.
std::vector<FrontCsvRow> read_front_csv(const std::filesystem::path& path);

void write_regret_report_csv(const RegretReport& report, const std::filesystem::path& path);

/// printf("%.10g") formatting shared by every CSV writer.
std::string format_number(double value);

// --- SVG ---------------------------------------------------------------

/// Fill colors in series order: blue, red, purple, orange, green.
inline constexpr std::array<std::string_view, 5> kPalette{"#1f77b4", "#d62728", "#9467bd", "#ff7f0e",
                                                         "#2ca02c"};

/// Legend color of a benchmark technique (bounded risk red, weighted sum
/// purple, Sharpe orange, percentile green, ideal gray).
std::string_view technique_color(TechniqueKind kind) noexcept;

struct SvgSeries {
    std::string name;
    std::vector<ObjectivePoint> points;  // drawn as x = risk, y = return
    std::optional<std::string> color;    // default: palette by series index
    double radius = 3.0;
};

std::string render_svg_scatter(std::span<const SvgSeries> series, std::string_view x_label,
                               std::string_view y_label, std::string_view title = {});
void write_svg_scatter(std::span<const SvgSeries> series, std::string_view x_label,
                       std::string_view y_label, const std::filesystem::path& path,
                       std::string_view title = {});

}  // namespace regretfolio
