#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "capflow/anisotropic.hpp"
#include "capflow/bounds.hpp"
#include "capflow/surface.hpp"

namespace capflow::cli {

// "128x256" -> {128, 256}
std::pair<int, int> parse_grid(const std::string& text);

// "sphere:r=1", "ellipsoid:1,4,9", "perturbed:r=1,amp=0.2,mode=2", "wulff"
struct BuiltinSpec {
    std::string name;
    std::map<std::string, double> params;     // named parameters
    std::vector<double> positional;           // bare numbers

    double get(const std::string& key, double fallback) const;
    double positional_or(size_t index, double fallback) const;
};
BuiltinSpec parse_builtin(const std::string& text);

// "euclidean", "ellipsoid:1,4,9", "lq:4,0.1"
anisotropic::NormPtr parse_norm(const std::string& text);

std::optional<surface::TheoremId> parse_theorem(const std::string& text);

// temp file + rename
void write_file_atomic(const std::string& path, const std::string& content);

// stable key/value JSON text for a bound report (schema 1)
std::string bound_report_json(const bounds::BoundReport& report, bool forced);

}  // namespace capflow::cli
