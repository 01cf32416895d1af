#pragma once

// Private JSON helpers shared by the file-format translation units.

#include "json.hpp"
#include "lrsd/array_sim.hpp"
#include "lrsd/run_config.hpp"
#include "lrsd/types.hpp"

#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>

namespace lrsd::detail {

using Json = nlohmann::ordered_json;

[[noreturn]] inline void fail(const std::string& path, const std::string& message) {
    throw ConfigError(path + ": " + message);
}

inline void require_object(const Json& value, const std::string& path) {
    if (!value.is_object()) fail(path, "expected an object");
}

inline void check_keys(const Json& object, const std::string& path,
                       std::initializer_list<const char*> allowed) {
    require_object(object, path);
    for (const auto& item : object.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) fail(path, "unknown key \"" + item.key() + "\"");
    }
}

inline const Json& member(const Json& object, const std::string& path, const char* key) {
    const auto it = object.find(key);
    if (it == object.end()) fail(path, std::string("missing key \"") + key + "\"");
    return *it;
}

inline double get_double(const Json& value, const std::string& path) {
    if (!value.is_number()) fail(path, "expected a number");
    return value.get<double>();
}

/// Numbers plus the sentinel string "inf" (JSON has no infinity literal).
inline double get_double_or_inf(const Json& value, const std::string& path) {
    if (value.is_string()) {
        if (value.get<std::string>() == "inf") {
            return std::numeric_limits<double>::infinity();
        }
        fail(path, "expected a number or \"inf\"");
    }
    return get_double(value, path);
}

inline Json double_or_inf(double value) {
    if (std::isinf(value) && value > 0.0) return Json("inf");
    return Json(value);
}

inline int get_int(const Json& value, const std::string& path) {
    if (!value.is_number_integer() && !value.is_number_unsigned()) {
        fail(path, "expected an integer");
    }
    const std::int64_t raw = value.get<std::int64_t>();
    if (raw < std::numeric_limits<int>::min() || raw > std::numeric_limits<int>::max()) {
        fail(path, "integer out of range");
    }
    return static_cast<int>(raw);
}

inline std::uint64_t get_u64(const Json& value, const std::string& path) {
    if (value.is_number_unsigned()) return value.get<std::uint64_t>();
    if (value.is_number_integer()) {
        const std::int64_t raw = value.get<std::int64_t>();
        if (raw < 0) fail(path, "expected a nonnegative integer");
        return static_cast<std::uint64_t>(raw);
    }
    fail(path, "expected a nonnegative integer");
}

inline bool get_bool(const Json& value, const std::string& path) {
    if (!value.is_boolean()) fail(path, "expected a boolean");
    return value.get<bool>();
}

inline std::string get_string(const Json& value, const std::string& path) {
    if (!value.is_string()) fail(path, "expected a string");
    return value.get<std::string>();
}

inline std::vector<double> get_double_list(const Json& value, const std::string& path) {
    if (!value.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(value.size());
    for (std::size_t i = 0; i < value.size(); ++i) {
        out.push_back(get_double(value[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

inline Json matrix_to_json(const ComplexMatrix& m) {
    Json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    Json data = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            data.push_back(m(i, j).real());
            data.push_back(m(i, j).imag());
        }
    }
    out["data"] = std::move(data);
    return out;
}

inline ComplexMatrix matrix_from_json(const Json& value, const std::string& path) {
    check_keys(value, path, {"rows", "cols", "data"});
    const int rows = get_int(member(value, path, "rows"), path + ".rows");
    const int cols = get_int(member(value, path, "cols"), path + ".cols");
    if (rows < 0 || cols < 0 || static_cast<long long>(rows) * cols > 100000000LL) {
        fail(path, "invalid dimensions");
    }
    const Json& data = member(value, path, "data");
    if (!data.is_array() || data.size() != static_cast<std::size_t>(2LL * rows * cols)) {
        fail(path + ".data", "expected 2*rows*cols numbers");
    }
    ComplexMatrix m(rows, cols);
    std::size_t at = 0;
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const double re = get_double(data[at], path + ".data");
            const double im = get_double(data[at + 1], path + ".data");
            m(i, j) = Complex(re, im);
            at += 2;
        }
    }
    return m;
}

inline Json cvector_to_json(const ComplexVector& v) {
    Json out;
    out["size"] = v.size();
    Json data = Json::array();
    for (Index i = 0; i < v.size(); ++i) {
        data.push_back(v(i).real());
        data.push_back(v(i).imag());
    }
    out["data"] = std::move(data);
    return out;
}

inline ComplexVector cvector_from_json(const Json& value, const std::string& path) {
    check_keys(value, path, {"size", "data"});
    const int size = get_int(member(value, path, "size"), path + ".size");
    if (size < 0 || size > 100000000) fail(path, "invalid size");
    const Json& data = member(value, path, "data");
    if (!data.is_array() || data.size() != static_cast<std::size_t>(2 * size)) {
        fail(path + ".data", "expected 2*size numbers");
    }
    ComplexVector v(size);
    for (int i = 0; i < size; ++i) {
        const double re = get_double(data[2 * i], path + ".data");
        const double im = get_double(data[2 * i + 1], path + ".data");
        v(i) = Complex(re, im);
    }
    return v;
}

// Implemented in run_config.cpp; reused for the echo embedded in scenario
// and solution files.
Json array_config_to_json(const ArrayConfig& config);
ArrayConfig array_config_from_json(const Json& value, const std::string& path);
Json run_config_to_json(const RunConfig& config);

} // namespace lrsd::detail
