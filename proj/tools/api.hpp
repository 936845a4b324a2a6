#pragma once

// Thin RAII layer over the C API for the command-line tool.

#include <prodplan/prodplan.h>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

// Process exit codes.
enum Exit : int {
    kOk = 0,
    kCheckFailed = 1,
    kInvalidInput = 2,
    kNonConvergence = 3,
    kInternal = 4,
};

struct Failure : std::runtime_error {
    Failure(int code, const std::string& message) : std::runtime_error(message), code(code) {}
    int code;
};

inline int exit_code(pp_status status) {
    switch (status) {
    case PP_OK: return kOk;
    case PP_ERR_INVALID_ARGUMENT:
    case PP_ERR_INVALID_CONFIG: return kInvalidInput;
    case PP_ERR_NONCONVERGENCE:
    case PP_ERR_BRACKET_FAILURE: return kNonConvergence;
    default: return kInternal;
    }
}

inline void check(pp_status status, const std::string& context = {}) {
    if (status == PP_OK) return;
    std::string message = pp_last_error();
    if (message.empty()) message = pp_status_name(status);
    throw Failure(exit_code(status), context.empty() ? message : context + ": " + message);
}

struct ModelDeleter {
    void operator()(pp_model* m) const { pp_model_destroy(m); }
};
struct SolutionDeleter {
    void operator()(pp_solution* s) const { pp_solution_destroy(s); }
};
struct PathSetDeleter {
    void operator()(pp_path_set* s) const { pp_path_set_destroy(s); }
};

using Model = std::unique_ptr<pp_model, ModelDeleter>;
using Solution = std::unique_ptr<pp_solution, SolutionDeleter>;
using PathSet = std::unique_ptr<pp_path_set, PathSetDeleter>;

inline Model load_model(const std::string& path) {
    pp_model* raw = nullptr;
    check(path.empty() ? pp_model_benchmark(&raw) : pp_model_load_file(path.c_str(), &raw), path);
    return Model(raw);
}

inline Model benchmark_model() {
    pp_model* raw = nullptr;
    check(pp_model_benchmark(&raw));
    return Model(raw);
}

inline Model clone(const pp_model* model) {
    pp_model* raw = nullptr;
    check(pp_model_clone(model, &raw));
    return Model(raw);
}

inline Solution solve(const pp_model* model) {
    pp_solution* raw = nullptr;
    check(pp_solve(model, nullptr, &raw));
    return Solution(raw);
}

inline std::vector<double> field(const pp_solution* sol, pp_solution_field f) {
    std::vector<double> out(static_cast<std::size_t>(pp_solution_regimes(sol)));
    check(pp_solution_get(sol, f, out.data(), out.size()));
    return out;
}

inline std::vector<double> field(const pp_model* model, pp_model_field f) {
    std::vector<double> out(static_cast<std::size_t>(pp_model_regimes(model)));
    check(pp_model_get_vector(model, f, out.data(), out.size()));
    return out;
}

inline std::vector<double> generator(const pp_model* model) {
    const auto m = static_cast<std::size_t>(pp_model_regimes(model));
    std::vector<double> out(m * m);
    check(pp_model_get_generator(model, out.data(), out.size()));
    return out;
}

/// Violated invariants, one message per entry.
inline std::vector<std::string> violations(const pp_model* model, unsigned flags = 0) {
    std::size_t needed = 0;
    int count = 0;
    check(pp_model_validate_ex(model, flags, nullptr, 0, &needed, &count));
    std::string text(needed + 1, '\0');
    check(pp_model_validate_ex(model, flags, text.data(), text.size(), &needed, &count));
    text.resize(needed);
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < text.size()) {
        const auto end = text.find('\n', start);
        out.push_back(text.substr(start, end == std::string::npos ? std::string::npos : end - start));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

struct ValueTable {
    std::vector<double> x;
    std::vector<std::vector<double>> v;  // v[i][k]
    bool nonnegative = false;
};

inline ValueTable value_table(const pp_solution* sol, double x_min, double x_max, std::size_t points) {
    const auto m = static_cast<std::size_t>(pp_solution_regimes(sol));
    std::vector<double> flat(points * (m + 1));
    int nonneg = 0;
    check(pp_value_table(sol, x_min, x_max, points, flat.data(), flat.size(), &nonneg));
    ValueTable t;
    t.nonnegative = nonneg != 0;
    t.v.assign(m, std::vector<double>(points));
    for (std::size_t k = 0; k < points; ++k) {
        t.x.push_back(flat[k * (m + 1)]);
        for (std::size_t i = 0; i < m; ++i) t.v[i][k] = flat[k * (m + 1) + 1 + i];
    }
    return t;
}

} // namespace cli
