#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace cli {

/// Shortest round-trip text for a double; fixed output for fixed input.
std::string fmt(double value);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    CsvTable& row(std::vector<std::string> cells);
    void write(const std::filesystem::path& path) const;
    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

// Shaded x-interval, e.g. time spent in one regime.
struct Band {
    double x0;
    double x1;
    int shade;
};

class SvgPlot {
public:
    SvgPlot(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add(Series s) { series_.push_back(std::move(s)); }
    void band(Band b) { bands_.push_back(b); }
    void band_legend(std::vector<std::string> names) { band_names_ = std::move(names); }
    void write(const std::filesystem::path& path) const;

private:
    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
    std::vector<Band> bands_;
    std::vector<std::string> band_names_;
};

/// out/<command>/<label or timestamp>; manifest.json is written by finish().
class RunDir {
public:
    RunDir(const std::string& root, const std::string& command, const std::string& label, std::string config,
           unsigned long long seed);

    const std::filesystem::path& path() const { return dir_; }
    std::filesystem::path operator/(const std::string& name) const { return dir_ / name; }
    void finish(int exit_code) const;

private:
    std::filesystem::path dir_;
    std::string command_;
    std::string config_;
    unsigned long long seed_;
    std::chrono::steady_clock::time_point start_;
};

} // namespace cli
