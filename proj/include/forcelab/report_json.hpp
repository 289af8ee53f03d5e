#pragma once

// Deterministic JSON text: object keys in insertion order, two-space indent,
// every double at 17 significant digits. Non-finite doubles become the
// strings "inf", "-inf", "nan".

#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "forcelab/classify.hpp"
#include "forcelab/trajectory.hpp"

namespace forcelab {

namespace detail {

inline void write_json_value(std::ostream& os, const Json& j, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << pad << Json(it.key()).dump() << ": ";
                write_json_value(os, it.value(), indent, depth + 1);
            }
            os << '\n' << close << '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            bool flat = true;
            for (const auto& v : j) flat = flat && !v.is_structured();
            if (flat) {
                os << '[';
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) os << ", ";
                    write_json_value(os, j[i], indent, depth + 1);
                }
                os << ']';
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ",\n";
                os << pad;
                write_json_value(os, j[i], indent, depth + 1);
            }
            os << '\n' << close << ']';
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (std::isfinite(v)) {
                os << format_double(v);
            } else {
                os << '"' << format_double(v) << '"';
            }
            return;
        }
        default:
            os << j.dump();
    }
}

}  // namespace detail

inline void write_json(std::ostream& os, const Json& j, int indent = 2) {
    detail::write_json_value(os, j, indent, 0);
    os << '\n';
}

inline std::string to_json_text(const Json& j) {
    std::ostringstream os;
    write_json(os, j);
    return os.str();
}

inline Json to_json(const ClassificationReport& r) {
    Json j;
    j["scenario"] = r.scenario;
    j["theorem"] = r.theorem;
    j["condition"] = verdict3_name(r.condition);
    j["simulation"] = verdict3_name(r.simulation);
    j["consistency"] = consistency_name(r.consistency);
    j["clauses"] = r.clauses;
    j["notes"] = r.notes;
    return j;
}

}  // namespace forcelab
