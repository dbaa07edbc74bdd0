// Closed-loop plant simulation, fault injection, windowing, CSV round trips.
#include <cstdio>
#include <gtest/gtest.h>

#include <faultgan/sim/Csv.hpp>
#include <faultgan/sim/Dataset.hpp>
#include <faultgan/sim/Plant.hpp>
#include <faultgan/sim/SystemConfig.hpp>

using namespace faultgan;
using namespace faultgan::sim;

namespace {

std::string temp_path(const char* name) {
    return std::string(::testing::TempDir()) + "/" + name;
}

}  // namespace

// =============================================================================
// simulate
// =============================================================================

TEST(Simulate, NoFaultsAllNormal) {
    auto ds = simulate(ClosedLoopSystem::default_plant(), 500, {}, 42);
    ASSERT_EQ(ds.records.size(), 500u);
    for (const auto& r : ds.records) EXPECT_EQ(r.label, "normal");
}

TEST(Simulate, DeterministicPerSeed) {
    const auto sys = ClosedLoopSystem::default_plant();
    auto a = simulate(sys, 300, {}, 7);
    auto b = simulate(sys, 300, {}, 7);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
        EXPECT_EQ(a.records[k].u, b.records[k].u);
        EXPECT_EQ(a.records[k].y, b.records[k].y);
    }
}

TEST(Simulate, ClosedLoopStaysBoundedAndTracks) {
    const auto sys = ClosedLoopSystem::default_plant();
    auto ds = simulate(sys, 3000, {}, 1);
    double worst_err = 0.0;
    for (std::size_t k = 1500; k < 3000; ++k) {
        const auto& r = ds.records[k];
        for (std::size_t ch = 0; ch < sys.q; ++ch) {
            EXPECT_LT(std::abs(r.y[ch]), 50.0);
            worst_err = std::max(worst_err, std::abs(r.y[ch] - sys.setpoint(ch, k)));
        }
    }
    // PI tracking of the square wave: loose bound, transients included.
    EXPECT_LT(worst_err, 8.0);
}

TEST(Simulate, SensorBiasLocality) {
    const auto sys = ClosedLoopSystem::default_plant();
    FaultSpec f;
    f.kind = FaultSpec::Kind::SensorBias;
    f.channel = 0;
    f.offset = 2.0;
    f.start = 100;
    f.end = 200;

    auto clean = simulate(sys, 400, {}, 9);
    auto faulty = simulate(sys, 400, {f}, 9);

    for (std::size_t k = 0; k < 400; ++k) {
        const double dy0 = faulty.records[k].y[0] - clean.records[k].y[0];
        if (k >= 100 && k <= 200) {
            EXPECT_DOUBLE_EQ(dy0, 2.0) << "step " << k;
            EXPECT_EQ(faulty.records[k].label, "fault:sensor_bias_y0");
        } else {
            EXPECT_DOUBLE_EQ(dy0, 0.0) << "step " << k;
            EXPECT_EQ(faulty.records[k].label, "normal");
        }
        // The loop regulates the true output, so nothing else moves.
        EXPECT_EQ(faulty.records[k].u, clean.records[k].u);
        EXPECT_DOUBLE_EQ(faulty.records[k].y[1], clean.records[k].y[1]);
    }
}

TEST(Simulate, StuckActuatorHoldsLevel) {
    const auto sys = ClosedLoopSystem::default_plant();
    FaultSpec f;
    f.kind = FaultSpec::Kind::StuckActuator;
    f.channel = 1;
    f.offset = 0.5;
    f.start = 50;
    f.end = 120;

    auto ds = simulate(sys, 200, {f}, 3);
    const double stuck = sys.u_min[1] + 0.5 * (sys.u_max[1] - sys.u_min[1]);
    for (std::size_t k = 50; k <= 120; ++k) {
        EXPECT_DOUBLE_EQ(ds.records[k].u[1], stuck);
        EXPECT_EQ(ds.records[k].label, "fault:stuck_u1");
    }
}

TEST(Simulate, SetpointOffsetFeedsBack) {
    const auto sys = ClosedLoopSystem::default_plant();
    FaultSpec f;
    f.kind = FaultSpec::Kind::SetpointOffset;
    f.channel = 0;
    f.offset = 3.0;
    f.start = 150;
    f.end = 299;

    auto clean = simulate(sys, 300, {}, 5);
    auto faulty = simulate(sys, 300, {f}, 5);
    for (std::size_t k = 0; k < 150; ++k) EXPECT_EQ(faulty.records[k].u, clean.records[k].u);
    // The controller chases the offset target from t_start on.
    EXPECT_NE(faulty.records[150].u, clean.records[150].u);
    double late_shift = 0.0;
    for (std::size_t k = 250; k < 300; ++k)
        late_shift += faulty.records[k].y[0] - clean.records[k].y[0];
    EXPECT_GT(late_shift / 50.0, 1.0);
}

TEST(Simulate, UnstableLoopAbortsNamingStep) {
    auto sys = ClosedLoopSystem::default_plant();
    for (std::size_t i = 0; i < sys.n; ++i) sys.a(i, i) = 1.3;  // spectral radius > 1
    sys.output_envelope = 100.0;
    try {
        simulate(sys, 5000, {}, 1);
        FAIL() << "expected instability abort";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
    }
}

TEST(Simulate, InvalidFaultRejected) {
    const auto sys = ClosedLoopSystem::default_plant();
    FaultSpec bad_channel;
    bad_channel.channel = 99;
    bad_channel.end = 10;
    EXPECT_THROW(simulate(sys, 100, {bad_channel}, 1), std::domain_error);

    FaultSpec bad_window;
    bad_window.start = 90;
    bad_window.end = 150;  // beyond horizon
    EXPECT_THROW(simulate(sys, 100, {bad_window}, 1), std::domain_error);

    FaultSpec bad_level;
    bad_level.kind = FaultSpec::Kind::StuckActuator;
    bad_level.offset = 1.5;
    bad_level.end = 10;
    EXPECT_THROW(simulate(sys, 100, {bad_level}, 1), std::domain_error);
}

// =============================================================================
// window_normalize
// =============================================================================

TEST(WindowNormalize, DegenerateWindowInUnitCube) {
    auto ds = simulate(ClosedLoopSystem::default_plant(), 400, {}, 11);
    auto w = window_normalize(ds, 1, 1);
    ASSERT_EQ(w.records.size(), 400u);
    EXPECT_EQ(w.u_dim, ds.u_dim + ds.y_dim);
    for (const auto& r : w.records)
        for (double v : r.u) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
}

TEST(WindowNormalize, MidpointScalesToHalf) {
    Dataset raw;
    raw.u_dim = 1;
    raw.y_dim = 0;
    for (double v : {10.0, 30.0, 20.0}) {
        Record r;
        r.u = {v};
        r.label = "normal";
        raw.records.push_back(r);
    }
    auto w = window_normalize(raw, 1, 1);
    EXPECT_DOUBLE_EQ(w.records[2].u[0], 0.5);
}

TEST(WindowNormalize, FaultyValuesNotClamped) {
    const auto sys = ClosedLoopSystem::default_plant();
    FaultSpec f;
    f.kind = FaultSpec::Kind::SensorBias;
    f.channel = 0;
    f.offset = 25.0;  // way outside the normal range
    f.start = 300;
    f.end = 380;
    auto ds = simulate(sys, 400, {f}, 13);
    auto w = window_normalize(ds, 1, 1);
    double max_seen = 0.0;
    for (std::size_t k = 300; k <= 380; ++k)
        max_seen = std::max(max_seen, w.records[k].u[sys.m + 0]);
    EXPECT_GT(max_seen, 1.0);
}

TEST(WindowNormalize, WindowLabelFromAnyFaultyRecord) {
    const auto sys = ClosedLoopSystem::default_plant();
    FaultSpec f;
    f.kind = FaultSpec::Kind::SensorBias;
    f.channel = 1;
    f.offset = 2.0;
    f.start = 100;
    f.end = 110;
    auto ds = simulate(sys, 200, {f}, 17);
    auto w = window_normalize(ds, 4, 1);
    // Window starting at 97 contains step 100.
    EXPECT_EQ(w.records[97].label, "fault:sensor_bias_y1");
    EXPECT_EQ(w.records[96].label, "normal");
}

TEST(WindowNormalize, ConstantChannelWarnsAndMapsToHalf) {
    Dataset raw;
    raw.u_dim = 2;
    for (int i = 0; i < 5; ++i) {
        Record r;
        r.u = {3.0, static_cast<double>(i)};
        r.label = "normal";
        raw.records.push_back(r);
    }
    auto w = window_normalize(raw, 2, 1);
    ASSERT_FALSE(w.warnings.empty());
    for (const auto& r : w.records) EXPECT_DOUBLE_EQ(r.u[0], 0.5);
}

TEST(WindowNormalize, TooFewRecordsRejected) {
    Dataset raw;
    raw.u_dim = 1;
    Record r;
    r.u = {1.0};
    r.label = "normal";
    raw.records.push_back(r);
    EXPECT_THROW(window_normalize(raw, 5, 1), std::domain_error);
}

TEST(WindowNormalize, MetadataFromNormalRecordsOnly) {
    const auto sys = ClosedLoopSystem::default_plant();
    FaultSpec f;
    f.kind = FaultSpec::Kind::SensorBias;
    f.channel = 0;
    f.offset = 30.0;
    f.start = 100;
    f.end = 200;
    auto clean = simulate(sys, 400, {}, 19);
    auto faulty = simulate(sys, 400, {f}, 19);
    auto wc = window_normalize(clean, 2, 1);
    auto wf = window_normalize(faulty, 2, 1);
    // The huge faulty values must not stretch the channel ranges.
    for (std::size_t c = 0; c < wc.channel_min.size(); ++c) {
        EXPECT_DOUBLE_EQ(wc.channel_min[c], wf.channel_min[c]);
        EXPECT_DOUBLE_EQ(wc.channel_max[c], wf.channel_max[c]);
    }
}

// =============================================================================
// CSV round trip
// =============================================================================

TEST(Csv, RoundTripExact) {
    auto ds = simulate(ClosedLoopSystem::default_plant(), 250, {}, 23);
    const auto path = temp_path("roundtrip.csv");
    save_dataset(ds, path);
    auto back = load_dataset(path);
    ASSERT_EQ(back.records.size(), ds.records.size());
    EXPECT_EQ(back.u_dim, ds.u_dim);
    EXPECT_EQ(back.y_dim, ds.y_dim);
    for (std::size_t k = 0; k < ds.records.size(); ++k) {
        EXPECT_EQ(back.records[k].u, ds.records[k].u);  // shortest round-trip text is exact
        EXPECT_EQ(back.records[k].y, ds.records[k].y);
        EXPECT_EQ(back.records[k].label, ds.records[k].label);
    }
    std::remove(path.c_str());
}

TEST(Csv, LabelPreservedVerbatim) {
    Dataset ds;
    ds.u_dim = 1;
    ds.y_dim = 0;
    Record r;
    r.u = {0.25};
    r.label = "fault:bias_y0";
    ds.records.push_back(r);
    const auto path = temp_path("label.csv");
    save_dataset(ds, path);
    EXPECT_EQ(load_dataset(path).records[0].label, "fault:bias_y0");
    std::remove(path.c_str());
}

TEST(Csv, WrongArityNamesLine) {
    const auto path = temp_path("bad.csv");
    {
        std::ofstream out(path);
        out << "t,u0,label\n0,1,normal\n1,2,3,normal\n";
    }
    try {
        load_dataset(path);
        FAIL() << "expected parse error";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
    std::remove(path.c_str());
}

TEST(Csv, NonFiniteRejected) {
    const auto path = temp_path("nan.csv");
    {
        std::ofstream out(path);
        out << "t,u0,label\n0,nan,normal\n";
    }
    EXPECT_THROW(load_dataset(path), std::runtime_error);
    std::remove(path.c_str());
}

// =============================================================================
// Config-driven construction
// =============================================================================

TEST(SystemConfig, FaultListParsed) {
    auto c = cfg::Config::from_string(
        "horizon = 300\n"
        "seed = 4\n"
        "fault.kind = sensor-bias\n"
        "fault.channel = 0\n"
        "fault.offset = 2\n"
        "fault.start = 50\n"
        "fault.end = 80\n"
        "fault2.kind = stuck-actuator\n"
        "fault2.channel = 1\n"
        "fault2.offset = 0.25\n"
        "fault2.start = 100\n"
        "fault2.end = 150\n");
    auto faults = faults_from_config(c);
    ASSERT_EQ(faults.size(), 2u);
    EXPECT_EQ(faults[0].label(), "fault:sensor_bias_y0");
    EXPECT_EQ(faults[1].label(), "fault:stuck_u1");
    auto ds = simulate_from_config(c);
    EXPECT_EQ(ds.records.size(), 300u);
    EXPECT_EQ(ds.records[60].label, "fault:sensor_bias_y0");
    EXPECT_EQ(ds.records[120].label, "fault:stuck_u1");
}
