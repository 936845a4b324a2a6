#include "report.hpp"

#include <prodplan/prodplan.h>

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cli {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr const char* kShades[] = {"#e8f1fa", "#fbe9e7", "#eaf5e4", "#fdf3e1"};

std::string escape(const std::string& text) {
    std::string out;
    for (char ch : text) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

std::string quote(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char ch : cell) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + "\"";
}

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::ofstream open(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::string timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

} // namespace

std::string fmt(double value) {
    if (value == 0.0) return "0";  // folds -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw std::logic_error("CSV row width does not match header");
    rows_.push_back(std::move(cells));
    return *this;
}

void CsvTable::write(const std::filesystem::path& path) const {
    auto out = open(path);
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << quote(cells[k]);
        out << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
}

void SvgPlot::write(const std::filesystem::path& path) const {
    const double width = 760, height = 460;
    const double left = 70, right = 180, top = 40, bottom = 55;
    const double pw = width - left - right, ph = height - top - bottom;

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : series_) {
        for (double v : s.x) x_lo = std::min(x_lo, v), x_hi = std::max(x_hi, v);
        for (double v : s.y) y_lo = std::min(y_lo, v), y_hi = std::max(y_hi, v);
    }
    if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    if (x_hi <= x_lo) x_hi = x_lo + 1;
    if (y_hi <= y_lo) y_lo -= 0.5, y_hi += 0.5;
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    auto sx = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto sy = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * ph; };

    auto out = open(path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title_)
        << "</text>\n";

    for (const auto& b : bands_) {
        const double a = sx(std::max(b.x0, x_lo)), z = sx(std::min(b.x1, x_hi));
        if (z <= a) continue;
        out << "<rect x=\"" << coord(a) << "\" y=\"" << top << "\" width=\"" << coord(z - a) << "\" height=\"" << ph
            << "\" fill=\"" << kShades[static_cast<std::size_t>(b.shade) % std::size(kShades)] << "\"/>\n";
    }

    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x_lo + (x_hi - x_lo) * k / 4.0, yv = y_lo + (y_hi - y_lo) * k / 4.0;
        out << "<text x=\"" << coord(sx(xv)) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
            << tick(xv) << "</text>\n"
            << "<text x=\"" << left - 6 << "\" y=\"" << coord(sy(yv) + 4) << "\" text-anchor=\"end\">" << tick(yv)
            << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
        << escape(x_label_) << "</text>\n"
        << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << top + ph / 2 << ")\">" << escape(y_label_) << "</text>\n";

    for (std::size_t k = 0; k < series_.size(); ++k) {
        const auto& s = series_[k];
        const char* color = kPalette[k % std::size(kPalette)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t j = 0; j < s.x.size() && j < s.y.size(); ++j) {
            out << (j ? " " : "") << coord(sx(s.x[j])) << ',' << coord(sy(s.y[j]));
        }
        out << "\"/>\n";
        const double ly = top + 14 + 18.0 * static_cast<double>(k);
        out << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 32 << "\" y2=\""
            << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly << "\">" << escape(s.name) << "</text>\n";
    }
    for (std::size_t k = 0; k < band_names_.size(); ++k) {
        const double ly = top + 14 + 18.0 * static_cast<double>(series_.size() + k);
        out << "<rect x=\"" << left + pw + 12 << "\" y=\"" << ly - 10 << "\" width=\"20\" height=\"10\" fill=\""
            << kShades[k % std::size(kShades)] << "\" stroke=\"#999\"/>\n"
            << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly << "\">" << escape(band_names_[k]) << "</text>\n";
    }
    out << "</svg>\n";
}

RunDir::RunDir(const std::string& root, const std::string& command, const std::string& label, std::string config,
               unsigned long long seed)
    : command_(command), config_(std::move(config)), seed_(seed), start_(std::chrono::steady_clock::now()) {
    const std::filesystem::path base = std::filesystem::path(root) / command;
    if (!label.empty()) {
        dir_ = base / label;
    } else {
        const std::string stamp = timestamp();
        dir_ = base / stamp;
        for (int k = 1; std::filesystem::exists(dir_); ++k) dir_ = base / (stamp + "-" + std::to_string(k));
    }
    std::filesystem::create_directories(dir_);
}

void RunDir::finish(int exit_code) const {
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    nlohmann::ordered_json manifest;
    manifest["command"] = command_;
    manifest["config"] = config_.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(config_);
    manifest["seed"] = seed_;
    manifest["version"] = pp_version();
    manifest["output_dir"] = dir_.string();
    manifest["wall_seconds"] = seconds;
    manifest["exit_code"] = exit_code;
    auto out = open(dir_ / "manifest.json");
    out << manifest.dump(2) << '\n';
}

} // namespace cli
