#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <faultgan/numerics/Matrix.hpp>
#include <faultgan/numerics/RandomStream.hpp>
#include <faultgan/sim/Dataset.hpp>

namespace faultgan::sim {

/// Injectable system-level fault over an inclusive step window [start, end].
struct FaultSpec {
    enum class Kind { SensorBias, SetpointOffset, StuckActuator };

    Kind kind = Kind::SensorBias;
    std::size_t channel = 0;
    // Bias / setpoint offset in output units; stuck level as a fraction of
    // the actuator range for StuckActuator.
    double offset = 0.0;
    std::size_t start = 0;
    std::size_t end = 0;

    bool active(std::size_t step) const { return step >= start && step <= end; }

    std::string label() const {
        switch (kind) {
            case Kind::SensorBias:
                return "fault:sensor_bias_y" + std::to_string(channel);
            case Kind::SetpointOffset:
                return "fault:setpoint_offset_y" + std::to_string(channel);
            case Kind::StuckActuator:
                return "fault:stuck_u" + std::to_string(channel);
        }
        return "fault:unknown";
    }

    static Kind parse_kind(const std::string& text) {
        if (text == "sensor-bias") return Kind::SensorBias;
        if (text == "setpoint-offset") return Kind::SetpointOffset;
        if (text == "stuck-actuator") return Kind::StuckActuator;
        throw std::domain_error("fault kind '" + text +
                                "' unknown (sensor-bias|setpoint-offset|stuck-actuator)");
    }
};

/// Synthetic closed-loop plant: stable linear state recursion with smooth
/// actuator saturation, one PI loop per output channel tracking a square-wave
/// setpoint, and a sinusoid-plus-noise disturbance.
///
/// Sensor-bias faults alter the recorded measurement only; the loop keeps
/// regulating the true output. Setpoint and actuator faults act inside the
/// loop, so their effects propagate through feedback.
struct ClosedLoopSystem {
    std::size_t n = 4, m = 2, p = 1, q = 2;

    numerics::Matrix a;  // n x n state map
    numerics::Matrix b;  // n x m input map
    numerics::Matrix e;  // n x p disturbance map
    numerics::Matrix c;  // q x n output map
    numerics::Vec x0;    // initial state

    numerics::Vec kp, ki;  // PI gains per output channel

    numerics::Vec setpoint_base, setpoint_amp;
    std::vector<std::size_t> setpoint_period;  // square-wave period in steps

    numerics::Vec u_min, u_max;
    bool smooth_saturation = true;

    double noise_sigma = 0.05;
    double dist_amp = 0.3;
    std::size_t dist_period = 1440;

    double sample_period_s = 60.0;
    double output_envelope = 1000.0;

    /// Deterministic stable realization for the requested dimensions.
    static ClosedLoopSystem default_plant(std::size_t n = 4, std::size_t m = 2, std::size_t p = 1,
                                          std::size_t q = 2) {
        ClosedLoopSystem s;
        s.n = n;
        s.m = m;
        s.p = p;
        s.q = q;

        s.a = numerics::Matrix(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            s.a(i, i) = 0.84 + 0.08 * static_cast<double>((i * 5) % n) / static_cast<double>(n);
            if (n > 1) s.a(i, (i + 1) % n) += 0.05;  // Gershgorin keeps the spectrum inside 1
        }

        s.b = numerics::Matrix(n, m);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) s.b(i, j) = (i % m == j) ? 0.5 : 0.08;

        s.e = numerics::Matrix(n, p);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < p; ++j) s.e(i, j) = ((i + j) % 2 == 0) ? 0.10 : 0.05;

        // Output r taps the states its own input drives, so the PI pairing
        // is controllable; cross coupling enters through A and the 0.08s in B.
        s.c = numerics::Matrix(q, n);
        for (std::size_t r = 0; r < q; ++r) {
            double weight = 1.0;
            for (std::size_t i = r % m; i < n; i += m) {
                s.c(r, i) = weight;
                weight *= 0.4;
            }
        }

        s.x0.assign(n, 0.0);
        s.kp.assign(q, 0.6);
        s.ki.assign(q, 0.08);

        s.setpoint_base.resize(q);
        s.setpoint_amp.resize(q);
        s.setpoint_period.resize(q);
        for (std::size_t r = 0; r < q; ++r) {
            s.setpoint_base[r] = 10.0 - 2.0 * static_cast<double>(r);
            s.setpoint_amp[r] = 2.0 - 0.5 * static_cast<double>(r % 2);
            s.setpoint_period[r] = 480 + 240 * (r % 2);
        }

        s.u_min.assign(m, -10.0);
        s.u_max.assign(m, 10.0);
        return s;
    }

    void validate() const {
        if (n == 0 || m == 0 || q == 0)
            throw std::domain_error("system: dimensions must be positive");
        if (m != q)
            throw std::domain_error("system: PI control pairs inputs with outputs, need m == q");
        if (a.rows() != n || a.cols() != n || b.rows() != n || b.cols() != m || c.rows() != q ||
            c.cols() != n || e.rows() != n || e.cols() != p)
            throw std::domain_error("system: matrix shapes inconsistent with (n,m,p,q)");
        if (x0.size() != n || kp.size() != q || ki.size() != q)
            throw std::domain_error("system: vector shapes inconsistent");
        if (u_min.size() != m || u_max.size() != m)
            throw std::domain_error("system: actuator limit shapes inconsistent");
        for (std::size_t j = 0; j < m; ++j)
            if (!(u_min[j] < u_max[j]))
                throw std::domain_error("system: u_min must be < u_max per channel");
        if (!(output_envelope > 0.0)) throw std::domain_error("system: envelope must be positive");
    }

    void validate_fault(const FaultSpec& f, std::size_t horizon) const {
        const std::size_t dim = f.kind == FaultSpec::Kind::StuckActuator ? m : q;
        if (f.channel >= dim)
            throw std::domain_error("fault: channel " + std::to_string(f.channel) +
                                    " out of range for " + f.label());
        if (f.start > f.end || f.end >= horizon)
            throw std::domain_error("fault: window [" + std::to_string(f.start) + "," +
                                    std::to_string(f.end) + "] outside horizon " +
                                    std::to_string(horizon));
        if (f.kind == FaultSpec::Kind::StuckActuator && (f.offset < 0.0 || f.offset > 1.0))
            throw std::domain_error("fault: stuck level fraction must lie in [0,1]");
    }

    double setpoint(std::size_t channel, std::size_t step) const {
        const std::size_t period = setpoint_period[channel];
        const bool high = (step % period) < period / 2;
        return setpoint_base[channel] + (high ? setpoint_amp[channel] : -setpoint_amp[channel]);
    }

    double saturate(double raw, std::size_t channel) const {
        const double mid = 0.5 * (u_min[channel] + u_max[channel]);
        const double half = 0.5 * (u_max[channel] - u_min[channel]);
        if (smooth_saturation) return mid + half * std::tanh((raw - mid) / half);
        return std::min(std::max(raw, u_min[channel]), u_max[channel]);
    }
};

/// Runs the closed loop for `horizon` steps, recording (t, u, measured y,
/// label) per step. Deterministic per seed.
inline Dataset simulate(const ClosedLoopSystem& sys, std::size_t horizon,
                        const std::vector<FaultSpec>& faults, std::uint64_t seed) {
    if (horizon < 1) throw std::domain_error("simulate: horizon must be >= 1");
    sys.validate();
    for (const FaultSpec& f : faults) sys.validate_fault(f, horizon);

    numerics::RandomStream rng(seed);

    Dataset ds;
    ds.sample_period_s = sys.sample_period_s;
    ds.u_dim = sys.m;
    ds.y_dim = sys.q;
    ds.records.reserve(horizon);

    numerics::Vec x = sys.x0;
    numerics::Vec integral(sys.q, 0.0);
    numerics::Vec d(sys.p, 0.0);

    for (std::size_t k = 0; k < horizon; ++k) {
        for (std::size_t i = 0; i < sys.p; ++i) {
            const double phase = 2.0 * std::numbers::pi * static_cast<double>(k) /
                                     static_cast<double>(sys.dist_period) +
                                 0.7 * static_cast<double>(i);
            d[i] = sys.noise_sigma * rng.gaussian() + sys.dist_amp * std::sin(phase);
        }

        numerics::Vec y_true = numerics::matvec(sys.c, x);
        for (double v : y_true)
            if (!std::isfinite(v) || std::abs(v) > sys.output_envelope)
                throw std::runtime_error("simulate: output envelope exceeded at step " +
                                         std::to_string(k));

        numerics::Vec y_meas = y_true;
        std::string label = "normal";
        numerics::Vec sp(sys.q);
        for (std::size_t r = 0; r < sys.q; ++r) sp[r] = sys.setpoint(r, k);

        for (const FaultSpec& f : faults) {
            if (!f.active(k)) continue;
            if (label == "normal") label = f.label();
            if (f.kind == FaultSpec::Kind::SensorBias) y_meas[f.channel] += f.offset;
            if (f.kind == FaultSpec::Kind::SetpointOffset) sp[f.channel] += f.offset;
        }

        numerics::Vec u(sys.m);
        for (std::size_t r = 0; r < sys.q; ++r) {
            const double err = sp[r] - y_true[r];
            integral[r] += err;
            u[r] = sys.saturate(sys.kp[r] * err + sys.ki[r] * integral[r], r);
        }
        for (const FaultSpec& f : faults)
            if (f.active(k) && f.kind == FaultSpec::Kind::StuckActuator)
                u[f.channel] = sys.u_min[f.channel] +
                               f.offset * (sys.u_max[f.channel] - sys.u_min[f.channel]);

        Record rec;
        rec.t = static_cast<double>(k) * sys.sample_period_s;
        rec.u = u;
        rec.y = y_meas;
        rec.label = std::move(label);
        ds.records.push_back(std::move(rec));

        numerics::Vec ax = numerics::matvec(sys.a, x);
        numerics::Vec bu = numerics::matvec(sys.b, u);
        numerics::Vec ed = numerics::matvec(sys.e, d);
        for (std::size_t i = 0; i < sys.n; ++i) x[i] = ax[i] + bu[i] + ed[i];
    }
    return ds;
}

}  // namespace faultgan::sim
