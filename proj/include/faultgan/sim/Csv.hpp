#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <faultgan/io/Format.hpp>
#include <faultgan/sim/Dataset.hpp>

namespace faultgan::sim {

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(io::trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace detail

/// Schema: header `t,u0..u{m-1},y0..y{q-1},label`, decimal floats, one record
/// per row. Windowed datasets have no y columns.
inline void save_dataset(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_dataset: cannot write '" + path + "'");
    out << "t";
    for (std::size_t i = 0; i < ds.u_dim; ++i) out << ",u" << i;
    for (std::size_t i = 0; i < ds.y_dim; ++i) out << ",y" << i;
    out << ",label\n";
    for (const Record& r : ds.records) {
        out << io::format_double(r.t);
        for (double v : r.u) out << ',' << io::format_double(v);
        for (double v : r.y) out << ',' << io::format_double(v);
        out << ',' << r.label << '\n';
    }
}

inline Dataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_dataset: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_dataset: empty file '" + path + "'");
    const auto header = detail::split_csv(line);
    if (header.size() < 2 || header.front() != "t" || header.back() != "label")
        throw std::runtime_error("load_dataset: line 1: header must be t,u*,y*,label");

    Dataset ds;
    std::size_t col = 1;
    while (col < header.size() - 1 && header[col] == "u" + std::to_string(ds.u_dim)) {
        ++ds.u_dim;
        ++col;
    }
    while (col < header.size() - 1 && header[col] == "y" + std::to_string(ds.y_dim)) {
        ++ds.y_dim;
        ++col;
    }
    if (col != header.size() - 1)
        throw std::runtime_error("load_dataset: line 1: unexpected column '" + header[col] + "'");

    const std::size_t arity = 2 + ds.u_dim + ds.y_dim;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (io::trim(line).empty()) continue;
        const auto fields = detail::split_csv(line);
        if (fields.size() != arity)
            throw std::runtime_error("load_dataset: line " + std::to_string(lineno) + ": expected " +
                                     std::to_string(arity) + " fields, got " +
                                     std::to_string(fields.size()));
        Record r;
        std::size_t f = 0;
        const auto value = [&](const std::string& text) {
            double v;
            try {
                v = io::parse_double(text);
            } catch (const std::exception&) {
                throw std::runtime_error("load_dataset: line " + std::to_string(lineno) +
                                         ": bad number '" + text + "'");
            }
            if (!std::isfinite(v))
                throw std::runtime_error("load_dataset: line " + std::to_string(lineno) +
                                         ": non-finite value");
            return v;
        };
        r.t = value(fields[f++]);
        r.u.reserve(ds.u_dim);
        for (std::size_t i = 0; i < ds.u_dim; ++i) r.u.push_back(value(fields[f++]));
        r.y.reserve(ds.y_dim);
        for (std::size_t i = 0; i < ds.y_dim; ++i) r.y.push_back(value(fields[f++]));
        r.label = fields[f];
        if (!is_valid_label(r.label))
            throw std::runtime_error("load_dataset: line " + std::to_string(lineno) +
                                     ": label must be 'normal' or 'fault:<name>'");
        ds.records.push_back(std::move(r));
    }
    return ds;
}

}  // namespace faultgan::sim
