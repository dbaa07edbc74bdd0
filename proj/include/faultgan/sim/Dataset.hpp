#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <faultgan/numerics/Matrix.hpp>

namespace faultgan::sim {

struct Record {
    double t = 0.0;
    numerics::Vec u;
    numerics::Vec y;
    std::string label;  // "normal" or "fault:<name>"
};

/// Labeled multichannel time series. A raw dataset holds (u, y) samples per
/// step; a windowed dataset (window_len > 0) holds flattened feature vectors
/// in `u` with empty `y`, plus the normalization metadata that produced them.
struct Dataset {
    double sample_period_s = 60.0;
    std::size_t u_dim = 0;
    std::size_t y_dim = 0;
    std::vector<Record> records;

    // Per raw channel, ordered u0..u{m-1}, y0..y{q-1}; filled by
    // window_normalize from normal records only.
    numerics::Vec channel_min;
    numerics::Vec channel_max;
    std::size_t window_len = 0;
    std::size_t stride = 0;

    std::vector<std::string> warnings;

    bool is_windowed() const { return window_len > 0; }
    std::size_t channels() const { return u_dim + y_dim; }
};

inline bool is_normal_label(const std::string& label) { return label == "normal"; }

inline bool is_valid_label(const std::string& label) {
    return label == "normal" || label.rfind("fault:", 0) == 0;
}

/// Per-channel min/max over normal records; channel order u then y.
inline std::pair<numerics::Vec, numerics::Vec> normal_channel_ranges(const Dataset& raw) {
    numerics::Vec lo(raw.channels(), 0.0), hi(raw.channels(), 0.0);
    bool seen = false;
    for (const Record& r : raw.records) {
        if (!is_normal_label(r.label)) continue;
        std::size_t c = 0;
        for (std::size_t i = 0; i < raw.u_dim; ++i, ++c) {
            if (!seen || r.u[i] < lo[c]) lo[c] = r.u[i];
            if (!seen || r.u[i] > hi[c]) hi[c] = r.u[i];
        }
        for (std::size_t i = 0; i < raw.y_dim; ++i, ++c) {
            if (!seen || r.y[i] < lo[c]) lo[c] = r.y[i];
            if (!seen || r.y[i] > hi[c]) hi[c] = r.y[i];
        }
        if (!seen) {
            // First normal record initializes both bounds.
            c = 0;
            for (std::size_t i = 0; i < raw.u_dim; ++i, ++c) lo[c] = hi[c] = r.u[i];
            for (std::size_t i = 0; i < raw.y_dim; ++i, ++c) lo[c] = hi[c] = r.y[i];
            seen = true;
        }
    }
    if (!seen) throw std::domain_error("window_normalize: dataset has no normal records");
    return {lo, hi};
}

/// Flattens W consecutive records into min-max scaled feature vectors.
///
/// Scaling statistics come from normal records only. Faulty values may land
/// outside [0,1] and are recorded as-is; clamping would erase the fault
/// signature. A window is "normal" iff every constituent record is.
inline Dataset window_normalize(const Dataset& raw, std::size_t window_len, std::size_t stride) {
    if (window_len < 1 || stride < 1)
        throw std::domain_error("window_normalize: window length and stride must be >= 1");
    if (raw.is_windowed()) throw std::domain_error("window_normalize: dataset already windowed");
    if (raw.records.size() < window_len)
        throw std::domain_error("window_normalize: " + std::to_string(raw.records.size()) +
                                " records < window length " + std::to_string(window_len));

    auto [lo, hi] = normal_channel_ranges(raw);

    Dataset out;
    out.sample_period_s = raw.sample_period_s;
    out.window_len = window_len;
    out.stride = stride;
    out.channel_min = lo;
    out.channel_max = hi;
    out.u_dim = window_len * raw.channels();
    out.y_dim = 0;

    for (std::size_t c = 0; c < raw.channels(); ++c) {
        if (hi[c] == lo[c]) {
            const std::string name = c < raw.u_dim ? "u" + std::to_string(c)
                                                   : "y" + std::to_string(c - raw.u_dim);
            out.warnings.push_back("channel " + name + " is constant in normal data; mapped to 0.5");
        }
    }

    const auto scale = [&](double v, std::size_t c) {
        if (hi[c] == lo[c]) return 0.5;
        return (v - lo[c]) / (hi[c] - lo[c]);
    };

    for (std::size_t start = 0; start + window_len <= raw.records.size(); start += stride) {
        Record w;
        w.t = raw.records[start].t;
        w.label = "normal";
        w.u.reserve(out.u_dim);
        for (std::size_t k = 0; k < window_len; ++k) {
            const Record& r = raw.records[start + k];
            std::size_t c = 0;
            for (std::size_t i = 0; i < raw.u_dim; ++i, ++c) w.u.push_back(scale(r.u[i], c));
            for (std::size_t i = 0; i < raw.y_dim; ++i, ++c) w.u.push_back(scale(r.y[i], c));
            if (!is_normal_label(r.label) && w.label == "normal") w.label = r.label;
        }
        out.records.push_back(std::move(w));
    }
    return out;
}

/// Feature vectors of the windows whose label is "normal".
inline std::vector<numerics::Vec> normal_windows(const Dataset& windowed) {
    std::vector<numerics::Vec> xs;
    for (const Record& r : windowed.records)
        if (is_normal_label(r.label)) xs.push_back(r.u);
    return xs;
}

inline std::pair<std::vector<numerics::Vec>, std::vector<std::string>> windows_with_labels(
    const Dataset& windowed) {
    std::vector<numerics::Vec> xs;
    std::vector<std::string> labels;
    xs.reserve(windowed.records.size());
    for (const Record& r : windowed.records) {
        xs.push_back(r.u);
        labels.push_back(r.label);
    }
    return {std::move(xs), std::move(labels)};
}

}  // namespace faultgan::sim
