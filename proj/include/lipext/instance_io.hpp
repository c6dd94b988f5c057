#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "lipext/euclid.hpp"
#include "lipext/supnorm.hpp"
#include "lipext/tree.hpp"

namespace lipext {

using Instance = std::variant<EuclideanInstance, SupNormInstance, TreeInstance>;

// Fixed instance document: fields n, dist (row-major), target (kind tag plus
// dimension or tree edges), A, values. Numbers are serialized with 17
// significant digits so files round-trip exactly and are byte-stable.
std::string serialize_instance(const Instance& inst);
Instance parse_instance(const std::string& text);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

std::uint64_t fnv1a64(std::string_view bytes);
std::string instance_digest(const Instance& inst);

// Fixed-width float formatting used everywhere output bytes must be stable.
std::string format_g17(double v);

// Metric + Lipschitz validation report for the `check` subcommand.
struct CheckReport {
    bool metric_ok = false;
    std::vector<MetricViolation> metric_violations;
    bool map_ok = false;
    std::string map_issue;
    double lip = 0.0;
    bool ok() const { return metric_ok && map_ok; }
    std::string describe() const;
};
CheckReport check_instance(const Instance& inst);

}  // namespace lipext
