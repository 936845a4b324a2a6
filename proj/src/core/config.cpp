#include "config.hpp"

#include "errors.hpp"

#include <json.hpp>

#include <array>
#include <fstream>
#include <sstream>

namespace prodplan {

namespace {

using nlohmann::json;

constexpr std::array kKeys = {"m", "Q", "r", "theta", "sigma", "c", "h", "N", "R"};

const json& require(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw ConfigError(std::string("missing key `") + key + "`");
    return *it;
}

double number(const json& value, const std::string& where) {
    if (!value.is_number()) throw ConfigError("`" + where + "` must be a number");
    return value.get<double>();
}

Vector numbers(const json& doc, const char* key, std::size_t expected) {
    const json& value = require(doc, key);
    if (!value.is_array()) throw ConfigError(std::string("`") + key + "` must be a list");
    if (value.size() != expected) {
        throw ConfigError(std::string("`") + key + "` has " + std::to_string(value.size()) + " entries, expected " +
                          std::to_string(expected));
    }
    Vector out(static_cast<Eigen::Index>(expected));
    for (std::size_t i = 0; i < expected; ++i) {
        out(static_cast<Eigen::Index>(i)) = number(value[i], std::string(key) + "[" + std::to_string(i) + "]");
    }
    return out;
}

} // namespace

ModelParams parse_params(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed parameter file: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("parameter file must be a JSON object");

    for (const auto& item : doc.items()) {
        bool known = false;
        for (const char* k : kKeys) known = known || item.key() == k;
        if (!known) throw ConfigError("unknown key `" + item.key() + "`");
    }

    const json& mv = require(doc, "m");
    if (!mv.is_number_integer() || mv.get<long long>() < 1) throw ConfigError("`m` must be a positive integer");
    const auto m = static_cast<std::size_t>(mv.get<long long>());

    ModelParams p;
    Vector flat = numbers(doc, "Q", m * m);
    Matrix q(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                flat(static_cast<Eigen::Index>(i * m + j));
        }
    }
    p.gen = Generator(std::move(q));
    p.r = number(require(doc, "r"), "r");
    p.theta = numbers(doc, "theta", m);
    p.sigma = numbers(doc, "sigma", m);
    p.c = numbers(doc, "c", m);
    p.h = numbers(doc, "h", m);
    p.N = numbers(doc, "N", m);
    p.R = numbers(doc, "R", m);
    return p;
}

ModelParams load_params(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open parameter file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_params(text.str());
}

std::string dump_params(const ModelParams& p) {
    const int m = p.regimes();
    auto list = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    std::vector<double> q;
    q.reserve(static_cast<std::size_t>(m * m));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) q.push_back(p.gen.rate(i, j));
    }
    json doc;
    doc["m"] = m;
    doc["Q"] = q;
    doc["r"] = p.r;
    doc["theta"] = list(p.theta);
    doc["sigma"] = list(p.sigma);
    doc["c"] = list(p.c);
    doc["h"] = list(p.h);
    doc["N"] = list(p.N);
    doc["R"] = list(p.R);
    return doc.dump(2);
}

} // namespace prodplan
