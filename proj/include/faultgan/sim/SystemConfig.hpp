#pragma once

#include <string>
#include <vector>

#include <faultgan/cfg/Config.hpp>
#include <faultgan/sim/Plant.hpp>

namespace faultgan::sim {

/// Builds the plant from a `key = value` config. Documented keys:
///   n, m, p, q, horizon, sample_period_s, seed,
///   fault.kind, fault.channel, fault.offset, fault.start, fault.end
/// (additional faults via fault2.*, fault3.*, ...). Optional overrides:
///   ctrl.kp, ctrl.ki, noise.sigma, dist.amp, dist.period, envelope.
inline ClosedLoopSystem system_from_config(const cfg::Config& c) {
    ClosedLoopSystem s = ClosedLoopSystem::default_plant(
        static_cast<std::size_t>(c.get_int("n", 4)), static_cast<std::size_t>(c.get_int("m", 2)),
        static_cast<std::size_t>(c.get_int("p", 1)), static_cast<std::size_t>(c.get_int("q", 2)));
    s.sample_period_s = c.get_double("sample_period_s", 60.0);
    if (c.has("ctrl.kp")) s.kp.assign(s.q, c.get_double("ctrl.kp", 0.6));
    if (c.has("ctrl.ki")) s.ki.assign(s.q, c.get_double("ctrl.ki", 0.08));
    s.noise_sigma = c.get_double("noise.sigma", s.noise_sigma);
    s.dist_amp = c.get_double("dist.amp", s.dist_amp);
    s.dist_period = static_cast<std::size_t>(c.get_int("dist.period", 1440));
    s.output_envelope = c.get_double("envelope", s.output_envelope);
    return s;
}

inline std::vector<FaultSpec> faults_from_config(const cfg::Config& c) {
    std::vector<FaultSpec> faults;
    for (std::size_t i = 1;; ++i) {
        const std::string prefix = i == 1 ? "fault." : "fault" + std::to_string(i) + ".";
        if (!c.has(prefix + "kind")) break;
        FaultSpec f;
        f.kind = FaultSpec::parse_kind(c.require_str(prefix + "kind"));
        f.channel = static_cast<std::size_t>(c.get_int(prefix + "channel", 0));
        f.offset = c.get_double(prefix + "offset", 0.0);
        f.start = static_cast<std::size_t>(c.get_int(prefix + "start", 0));
        f.end = static_cast<std::size_t>(c.get_int(prefix + "end", 0));
        faults.push_back(f);
    }
    return faults;
}

inline Dataset simulate_from_config(const cfg::Config& c) {
    const auto horizon = static_cast<std::size_t>(c.get_int("horizon", 2880));
    const auto seed = static_cast<std::uint64_t>(c.get_int("seed", 1));
    return simulate(system_from_config(c), horizon, faults_from_config(c), seed);
}

}  // namespace faultgan::sim
