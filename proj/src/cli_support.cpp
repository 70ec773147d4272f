#include "capflow/cli_support.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace capflow::cli {

std::pair<int, int> parse_grid(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos)
        throw std::invalid_argument("grid: expected NxM, got '" + text + "'");
    const int nt = std::stoi(text.substr(0, x));
    const int np = std::stoi(text.substr(x + 1));
    if (nt < 8 || np < 8) throw std::invalid_argument("grid: too coarse, need at least 8x8");
    return {nt, np};
}

double BuiltinSpec::get(const std::string& key, double fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

double BuiltinSpec::positional_or(size_t index, double fallback) const {
    return index < positional.size() ? positional[index] : fallback;
}

BuiltinSpec parse_builtin(const std::string& text) {
    BuiltinSpec spec;
    const auto colon = text.find(':');
    spec.name = text.substr(0, colon);
    if (spec.name.empty()) throw std::invalid_argument("builtin: empty name");
    if (colon == std::string::npos) return spec;
    std::string rest = text.substr(colon + 1);
    size_t pos = 0;
    while (pos <= rest.size()) {
        const auto comma = rest.find(',', pos);
        const std::string token =
            rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!token.empty()) {
            const auto eq = token.find('=');
            try {
                if (eq == std::string::npos)
                    spec.positional.push_back(std::stod(token));
                else
                    spec.params[token.substr(0, eq)] = std::stod(token.substr(eq + 1));
            } catch (const std::exception&) {
                throw std::invalid_argument("builtin: bad parameter token '" + token + "'");
            }
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return spec;
}

anisotropic::NormPtr parse_norm(const std::string& text) {
    const BuiltinSpec spec = parse_builtin(text);
    if (spec.name == "euclidean") return anisotropic::euclidean_norm();
    if (spec.name == "ellipsoid" || spec.name == "ellipsoidal") {
        if (spec.positional.size() != 3)
            throw std::invalid_argument("norm: ellipsoid needs three diagonal entries, e.g. ellipsoid:1,4,9");
        return anisotropic::ellipsoidal_norm_diag(spec.positional[0], spec.positional[1],
                                                  spec.positional[2]);
    }
    if (spec.name == "lq") {
        if (spec.positional.size() != 2)
            throw std::invalid_argument("norm: lq needs q and eps, e.g. lq:4,0.1");
        return anisotropic::smoothed_lq_norm(spec.positional[0], spec.positional[1]);
    }
    throw std::invalid_argument("norm: unknown family '" + spec.name +
                                "' (supported: euclidean, ellipsoid:a,b,c, lq:q,eps)");
}

std::optional<surface::TheoremId> parse_theorem(const std::string& text) {
    using surface::TheoremId;
    if (text == "thm1") return TheoremId::Thm1;
    if (text == "thm2") return TheoremId::Thm2;
    if (text == "thm3") return TheoremId::Thm3;
    if (text == "thm4") return TheoremId::Thm4;
    if (text == "thm5") return TheoremId::Thm5;
    if (text == "thm6" || text == "cor1") return TheoremId::Thm6;
    return std::nullopt;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open output file: " + tmp);
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot move output into place: " + path);
    }
}

std::string bound_report_json(const bounds::BoundReport& report, bool forced) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["theorem"] = report.theorem;
    j["case_label"] = report.case_label;
    j["p"] = report.p;
    nlohmann::ordered_json inputs;
    for (const auto& [k, v] : report.inputs) inputs[k] = v;
    j["inputs"] = inputs;
    j["value"] = report.value;
    j["quadrature_error"] = report.quadrature_error;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : report.hypotheses.checks) {
        nlohmann::ordered_json jc;
        jc["name"] = c.name;
        jc["passed"] = c.passed;
        jc["detail"] = c.detail;
        checks.push_back(jc);
    }
    j["hypotheses"] = nlohmann::ordered_json{{"checks", checks},
                                             {"all_passed", report.hypotheses.all_passed()}};
    j["forced"] = forced;
    return j.dump(2) + "\n";
}

}  // namespace capflow::cli
