#include "regretfolio/data_io.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "regretfolio/error.hpp"

namespace regretfolio {

using nlohmann::json;

namespace {

const json& require(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object()) throw Error(ErrorCode::ParseError, where + " must be an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw Error(ErrorCode::ParseError, "missing field '" + where + key + "'");
    return *it;
}

Vector number_array(const json& j, const std::string& field) {
    if (!j.is_array()) throw Error(ErrorCode::ParseError, "field '" + field + "' must be an array");
    Vector out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw Error(ErrorCode::ParseError, "field '" + field + "[" + std::to_string(i) + "]' must be a number");
        out.push_back(j[i].get<double>());
    }
    return out;
}

Matrix number_matrix(const json& j, const std::string& field) {
    if (!j.is_array()) throw Error(ErrorCode::ParseError, "field '" + field + "' must be an array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < j.size(); ++i)
        rows.push_back(number_array(j[i], field + "[" + std::to_string(i) + "]"));
    for (const auto& r : rows)
        if (r.size() != rows.size())
            throw Error(ErrorCode::ValidationError, "field '" + field + "' must be a square matrix");
    return Matrix::from_rows(rows);
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

}  // namespace

DatasetFile parse_dataset(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::ParseError, "dataset must be a JSON object");

    DatasetFile file;
    const json& version = require(doc, "version", "");
    if (!version.is_string()) throw Error(ErrorCode::ParseError, "field 'version' must be a string");
    file.version = version.get<std::string>();

    const json& assets = require(doc, "assets", "");
    if (!assets.is_array()) throw Error(ErrorCode::ParseError, "field 'assets' must be an array");
    for (std::size_t i = 0; i < assets.size(); ++i) {
        if (!assets[i].is_string())
            throw Error(ErrorCode::ParseError, "field 'assets[" + std::to_string(i) + "]' must be a string");
        file.assets.push_back(assets[i].get<std::string>());
    }
    file.mu = number_array(require(doc, "mu", ""), "mu");

    const json& regimes = require(doc, "regimes", "");
    if (!regimes.is_array()) throw Error(ErrorCode::ParseError, "field 'regimes' must be an array");
    for (std::size_t k = 0; k < regimes.size(); ++k) {
        const std::string where = "regimes[" + std::to_string(k) + "].";
        RegimeData r;
        const json& label = require(regimes[k], "label", where);
        if (!label.is_string()) throw Error(ErrorCode::ParseError, "field '" + where + "label' must be a string");
        r.label = label.get<std::string>();
        r.stds = number_array(require(regimes[k], "stds", where), where + "stds");
        r.corr = number_matrix(require(regimes[k], "corr", where), where + "corr");
        file.regimes.push_back(std::move(r));
    }
    return file;
}

std::string dataset_to_json(const DatasetFile& file) {
    json doc;
    doc["version"] = file.version;
    doc["assets"] = file.assets;
    doc["mu"] = file.mu;
    json regimes = json::array();
    for (const auto& r : file.regimes)
        regimes.push_back({{"label", r.label}, {"stds", r.stds}, {"corr", r.corr.to_rows()}});
    doc["regimes"] = std::move(regimes);
    return doc.dump(2) + "\n";
}

Dataset validate_dataset(const DatasetFile& file) {
    if (file.version != kDatasetVersion)
        throw Error(ErrorCode::ValidationError, "unsupported dataset version '" + file.version + "'");
    if (file.assets.size() != file.mu.size())
        throw Error(ErrorCode::ValidationError, "assets and mu must have equal length");
    if (file.regimes.empty()) throw Error(ErrorCode::ValidationError, "at least one regime required");

    AssetUniverse universe;
    try {
        universe = AssetUniverse(file.assets, file.mu);
    } catch (const Error& e) {
        throw Error(ErrorCode::ValidationError, e.message());
    }

    std::set<std::string> labels;
    std::vector<RegimeScenario> scenarios;
    for (const auto& r : file.regimes) {
        const std::string where = "regime '" + r.label + "': ";
        if (!labels.insert(r.label).second)
            throw Error(ErrorCode::ValidationError, where + "labels must be unique");
        if (r.stds.size() != universe.size() || r.corr.rows() != universe.size())
            throw Error(ErrorCode::ValidationError, where + "dimension does not match the asset count");
        try {
            scenarios.push_back(make_scenario(r.label, r.stds, r.corr));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NotPositiveSemidefinite) {
                Matrix cov(r.corr.rows(), r.corr.cols());
                for (std::size_t i = 0; i < cov.rows(); ++i)
                    for (std::size_t j = 0; j < cov.cols(); ++j) cov(i, j) = r.corr(i, j) * r.stds[i] * r.stds[j];
                throw Error(ErrorCode::PsdError, where + "covariance not positive semidefinite (minimum eigenvalue " +
                                                     format_number(min_eigenvalue(cov)) + ")");
            }
            throw Error(ErrorCode::ValidationError, where + e.message());
        }
    }
    return Dataset{std::move(universe), UncertaintySet(std::move(scenarios))};
}

Dataset load_dataset(const std::filesystem::path& path) {
    return validate_dataset(parse_dataset(read_text(path)));
}

void write_dataset(const DatasetFile& file, const std::filesystem::path& path) {
    write_text(path, dataset_to_json(file));
}

void GeneratorSpec::validate() const {
    auto ordered = [](const std::pair<double, double>& r) { return r.first <= r.second; };
    if (n_assets < 2) throw Error(ErrorCode::InvalidArgument, "n_assets must be >= 2");
    if (!ordered(return_range) || !ordered(std_range) || !ordered(corr_crisis) || !ordered(corr_normal) ||
        !ordered(corr_growth))
        throw Error(ErrorCode::InvalidArgument, "generator ranges must be ordered (low <= high)");
    if (!(std_range.first > 0.0)) throw Error(ErrorCode::InvalidArgument, "std range must be positive");
    if (corr_crisis.first < corr_normal.first || corr_crisis.second < corr_normal.second ||
        corr_normal.first < corr_growth.first || corr_normal.second < corr_growth.second)
        throw Error(ErrorCode::InvalidArgument, "correlation levels must satisfy C >= N >= G");
    if (corr_growth.first < -1.0 || corr_crisis.second > 1.0)
        throw Error(ErrorCode::InvalidArgument, "correlation levels must lie in [-1, 1]");
}

double mean_off_diagonal(const Matrix& m) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            sum += m(i, j);
            ++count;
        }
    return count ? sum / static_cast<double>(count) : 0.0;
}

Matrix repair_correlation(const Matrix& corr, double floor) {
    const auto n = static_cast<Eigen::Index>(corr.rows());
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = corr(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(floor);
    Eigen::MatrixXd rebuilt = eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
    Eigen::VectorXd scale = rebuilt.diagonal().cwiseSqrt().cwiseInverse();
    rebuilt = scale.asDiagonal() * rebuilt * scale.asDiagonal();

    Matrix out(corr.rows(), corr.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
        out(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = std::clamp(0.5 * (rebuilt(i, j) + rebuilt(j, i)), -1.0, 1.0);
            out(i, j) = v;
            out(j, i) = v;
        }
    }
    return out;
}

DatasetFile generate_synthetic(const GeneratorSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    auto uniform = [&](std::pair<double, double> range) {
        return std::uniform_real_distribution<double>(range.first, range.second)(rng);
    };
    const std::size_t n = spec.n_assets;

    DatasetFile file;
    for (std::size_t i = 0; i < n; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "asset_%02zu", i + 1);
        file.assets.emplace_back(name);
    }
    file.mu.resize(n);
    for (double& m : file.mu) m = uniform(spec.return_range);
    std::sort(file.mu.begin(), file.mu.end());
    // Higher expected return comes with higher volatility.
    Vector stds(n);
    for (double& s : stds) s = uniform(spec.std_range);
    std::sort(stds.begin(), stds.end());

    const std::pair<const char*, std::pair<double, double>> regimes[] = {
        {"C", spec.corr_crisis}, {"N", spec.corr_normal}, {"G", spec.corr_growth}};
    for (const auto& [label, interval] : regimes) {
        const double level = uniform(interval);
        Matrix corr = Matrix::identity(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = std::clamp(level + uniform({-0.05, 0.05}), -0.99, 0.99);
                corr(i, j) = v;
                corr(j, i) = v;
            }
        file.regimes.push_back({label, stds, repair_correlation(corr)});
    }
    return file;
}

// --- CSV ---------------------------------------------------------------

std::string format_number(double value) {
    if (value == 0.0) value = 0.0;  // drop the sign of -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

std::vector<FrontCsvRow> to_csv_rows(std::span<const FrontPoint> points) {
    std::vector<FrontCsvRow> rows;
    for (const auto& p : points)
        rows.push_back({p.target_r, p.ret, p.risk, "", Vector(p.x.weights().begin(), p.x.weights().end())});
    return rows;
}

std::vector<FrontCsvRow> to_csv_rows(std::span<const RobustFrontPoint> points) {
    std::vector<FrontCsvRow> rows;
    for (const auto& p : points)
        rows.push_back({p.target_r, p.ret, p.regret, p.argmax_scenario,
                        Vector(p.x.weights().begin(), p.x.weights().end())});
    return rows;
}

void write_front_csv(std::vector<FrontCsvRow> rows, std::size_t n_assets, const std::filesystem::path& path) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const FrontCsvRow& a, const FrontCsvRow& b) { return a.ret < b.ret; });
    std::string out = "target_return,return,risk_or_regret,argmax_scenario";
    for (std::size_t i = 0; i < n_assets; ++i) out += ",weight_" + std::to_string(i + 1);
    out += '\n';
    for (const auto& r : rows) {
        if (r.weights.size() != n_assets)
            throw Error(ErrorCode::DimensionMismatch, "front row has the wrong number of weights");
        out += format_number(r.target_return) + ',' + format_number(r.ret) + ',' + format_number(r.risk) + ',' +
               r.argmax_scenario;
        for (double w : r.weights) out += ',' + format_number(std::max(w, 0.0));
        out += '\n';
    }
    write_text(path, out);
}

void write_front_csv(const ParetoFront& front, std::size_t n_assets, const std::filesystem::path& path) {
    write_front_csv(to_csv_rows(front.points), n_assets, path);
}

void write_front_csv(std::span<const RobustFrontPoint> front, std::size_t n_assets,
                     const std::filesystem::path& path) {
    write_front_csv(to_csv_rows(front), n_assets, path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_number(const std::string& s, std::size_t line_no, const std::string& column) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line_no) + ", column '" + column + "': not a number: '" + s + "'");
    return v;
}

}  // namespace

std::vector<FrontCsvRow> read_front_csv(const std::filesystem::path& path) {
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty CSV file '" + path.string() + "'");
    const auto header = split_csv_line(line);
    const std::vector<std::string> fixed{"target_return", "return", "risk_or_regret", "argmax_scenario"};
    if (header.size() < fixed.size() || !std::equal(fixed.begin(), fixed.end(), header.begin()))
        throw Error(ErrorCode::ParseError, "line 1: unexpected front CSV header");
    const std::size_t n_weights = header.size() - fixed.size();
    for (std::size_t i = 0; i < n_weights; ++i)
        if (header[fixed.size() + i] != "weight_" + std::to_string(i + 1))
            throw Error(ErrorCode::ParseError, "line 1: expected column weight_" + std::to_string(i + 1));

    std::vector<FrontCsvRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                                   std::to_string(header.size()) + " fields");
        FrontCsvRow row;
        row.target_return = parse_number(cells[0], line_no, header[0]);
        row.ret = parse_number(cells[1], line_no, header[1]);
        row.risk = parse_number(cells[2], line_no, header[2]);
        row.argmax_scenario = cells[3];
        for (std::size_t i = 0; i < n_weights; ++i)
            row.weights.push_back(parse_number(cells[4 + i], line_no, header[4 + i]));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_regret_report_csv(const RegretReport& report, const std::filesystem::path& path) {
    std::string out = "return,regret,argmax_scenario";
    for (const auto& l : report.labels) out += ",variance_" + l;
    for (const auto& l : report.labels) out += ",gap_" + l;
    out += '\n';
    for (const auto& r : report.rows) {
        out += format_number(r.ret) + ',' + format_number(r.regret) + ',' + r.argmax_scenario;
        for (double v : r.variances) out += ',' + format_number(v);
        for (double g : r.gaps) out += ',' + format_number(g);
        out += '\n';
    }
    write_text(path, out);

    std::string summary = "scenario,below_benchmark,at_or_above_benchmark\n";
    for (std::size_t s = 0; s < report.labels.size(); ++s)
        summary += report.labels[s] + ',' + std::to_string(report.below[s]) + ',' +
                   std::to_string(report.above[s]) + '\n';
    std::filesystem::path summary_path = path;
    summary_path.replace_filename(path.stem().string() + "_summary" + path.extension().string());
    write_text(summary_path, summary);
}

// --- SVG ---------------------------------------------------------------

std::string_view technique_color(TechniqueKind kind) noexcept {
    switch (kind) {
        case TechniqueKind::BoundedRisk: return kPalette[1];
        case TechniqueKind::WeightedSum: return kPalette[2];
        case TechniqueKind::Sharpe: return kPalette[3];
        case TechniqueKind::Percentile: return kPalette[4];
        case TechniqueKind::Ideal: return "#7f7f7f";
    }
    return kPalette[0];
}

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fixed2(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-14 ? 0.0 : v);
    return buf;
}

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
};

Axis padded(double lo, double hi) {
    double span = hi - lo;
    if (!(span > 0.0)) {
        const double pad = std::max(std::abs(lo) * 0.05, 1e-3);
        return {lo - pad, hi + pad};
    }
    return {lo - 0.05 * span, hi + 0.05 * span};
}

}  // namespace

std::string render_svg_scatter(std::span<const SvgSeries> series, std::string_view x_label,
                               std::string_view y_label, std::string_view title) {
    if (series.empty()) throw Error(ErrorCode::InvalidArgument, "an SVG scatter needs at least one series");

    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : series)
        for (const auto& p : s.points) {
            xmin = std::min(xmin, p.risk);
            xmax = std::max(xmax, p.risk);
            ymin = std::min(ymin, p.ret);
            ymax = std::max(ymax, p.ret);
        }
    if (!std::isfinite(xmin)) xmin = xmax = ymin = ymax = 0.0;
    const Axis ax = padded(xmin, xmax);
    const Axis ay = padded(ymin, ymax);

    constexpr double width = 760, height = 500;
    constexpr double left = 80, right = 190, top = 40, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    auto px = [&](double x) { return left + (x - ax.lo) / (ax.hi - ax.lo) * plot_w; };
    auto py = [&](double y) { return top + plot_h - (y - ay.lo) / (ay.hi - ay.lo) * plot_h; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    if (!title.empty())
        svg << "<text x=\"" << fixed2(left + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
            << xml_escape(title) << "</text>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << fixed2(plot_w) << "\" height=\""
        << fixed2(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

    constexpr int ticks = 5;
    for (int k = 0; k <= ticks; ++k) {
        const double xv = ax.lo + (ax.hi - ax.lo) * k / ticks;
        const double yv = ay.lo + (ay.hi - ay.lo) * k / ticks;
        const double tx = px(xv), ty = py(yv);
        svg << "<line x1=\"" << fixed2(tx) << "\" y1=\"" << fixed2(top + plot_h) << "\" x2=\"" << fixed2(tx)
            << "\" y2=\"" << fixed2(top + plot_h + 5) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fixed2(tx) << "\" y=\"" << fixed2(top + plot_h + 20)
            << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(xv) << "</text>\n"
            << "<line x1=\"" << fixed2(left - 5) << "\" y1=\"" << fixed2(ty) << "\" x2=\"" << left << "\" y2=\""
            << fixed2(ty) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fixed2(left - 8) << "\" y=\"" << fixed2(ty + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << tick_label(yv) << "</text>\n";
    }
    svg << "<text x=\"" << fixed2(left + plot_w / 2) << "\" y=\"" << fixed2(height - 15)
        << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(x_label) << "</text>\n"
        << "<text x=\"20\" y=\"" << fixed2(top + plot_h / 2) << "\" text-anchor=\"middle\" font-size=\"13\" "
        << "transform=\"rotate(-90 20 " << fixed2(top + plot_h / 2) << ")\">" << xml_escape(y_label) << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const std::string color = s.color ? *s.color : std::string(kPalette[i % kPalette.size()]);
        svg << "<g fill=\"" << xml_escape(color) << "\">\n";
        for (const auto& p : s.points)
            svg << "<circle cx=\"" << fixed2(px(p.risk)) << "\" cy=\"" << fixed2(py(p.ret)) << "\" r=\""
                << fixed2(s.radius) << "\"/>\n";
        svg << "</g>\n";
        const double ly = top + 10 + 20.0 * static_cast<double>(i);
        svg << "<rect x=\"" << fixed2(left + plot_w + 15) << "\" y=\"" << fixed2(ly - 8)
            << "\" width=\"10\" height=\"10\" fill=\"" << xml_escape(color) << "\"/>\n"
            << "<text x=\"" << fixed2(left + plot_w + 30) << "\" y=\"" << fixed2(ly + 1)
            << "\" font-size=\"12\">" << xml_escape(s.name) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_svg_scatter(std::span<const SvgSeries> series, std::string_view x_label, std::string_view y_label,
                       const std::filesystem::path& path, std::string_view title) {
    write_text(path, render_svg_scatter(series, x_label, y_label, title));
}

}  // namespace regretfolio
