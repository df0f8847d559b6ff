#include <gtest/gtest.h>

#include <cmath>

#include "qamp/fock/circuits.hpp"
#include "qamp/fock/compress.hpp"
#include "qamp/fock/detect.hpp"
#include "qamp/fock/linear_map.hpp"
#include "qamp/fock/state.hpp"
#include "test_util.hpp"

using namespace qamp;
using namespace qamp::fock;

namespace {

ModeRegister two_modes() { return ModeRegister({"a", "b"}, 4, 4); }

FockEnsemble single_branch(ModeRegister reg, PureState st) {
    FockEnsemble ens;
    ens.reg = std::move(reg);
    ens.push(1.0, std::move(st));
    return ens;
}

} // namespace

TEST(FockState, CreationOperatorNormalization) {
    PureState st = vacuum_state();
    st = st.created(0).created(0);  // (a†)^2 |0> = sqrt(2) |2>
    EXPECT_NEAR(st.norm2(), 2.0, 1e-15);
    EXPECT_NEAR(std::abs(st.amp.at(with_occ(0, 0, 2))), std::sqrt(2.0), 1e-15);
}

TEST(FockState, RegisterValidatesCapsAndLabels) {
    EXPECT_THROW(ModeRegister({"a", "a"}, 3, 6), validation_error);
    ModeRegister tiny({"a", "b"}, 1, 2);
    FockEnsemble ens;
    ens.reg = tiny;
    PureState two = vacuum_state().created(0).created(0);
    two.normalize();
    EXPECT_THROW(ens.push(1.0, two), truncation_overflow_error);
}

TEST(LinearMapBasics, RejectsNonUnitary) {
    EXPECT_THROW(LinearMap({"a", "b"}, {{1.0, 0.0}, {0.1, 1.0}}), validation_error);
    EXPECT_NO_THROW(LinearMap({"a", "b"}, {{0.0, 1.0}, {1.0, 0.0}}));
}

TEST(LinearMapBasics, IdentityLeavesStateUntouched) {
    auto ens = single_branch(two_modes(), [] {
        PureState st = vacuum_state().created(0).created(1).created(1);
        st.normalize();
        return st;
    }());
    FockEnsemble out = apply_map(ens, LinearMap({"a", "b"}, {{1, 0}, {0, 1}}));
    ASSERT_EQ(out.branches.size(), 1u);
    EXPECT_NEAR(std::abs(out.branches[0].state.inner(ens.branches[0].state)), 1.0, 1e-12);
}

TEST(LinearMapBasics, BalancedSplitterSinglePhoton) {
    auto ens = single_branch(two_modes(), vacuum_state().created(0));
    FockEnsemble out = apply_map(ens, LinearMap::splitter("a", "b", 0.5));
    const auto& st = out.branches[0].state;
    EXPECT_NEAR(std::abs(st.amp.at(with_occ(0, 0, 1))), 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(std::abs(st.amp.at(with_occ(0, 1, 1))), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(LinearMapBasics, HongOuMandelBunching) {
    auto ens = single_branch(two_modes(), vacuum_state().created(0).created(1));
    const double s = 1.0 / std::sqrt(2.0);
    FockEnsemble out = apply_map(ens, LinearMap({"a", "b"}, {{s, s}, {s, -s}}));
    const auto& st = out.branches[0].state;
    // both photons bunch; the (1,1) component vanishes exactly
    const OccKey k11 = with_occ(with_occ(0, 0, 1), 1, 1);
    EXPECT_TRUE(st.amp.find(k11) == st.amp.end() || std::abs(st.amp.at(k11)) < 1e-14);
    EXPECT_NEAR(std::norm(st.amp.at(with_occ(0, 0, 2))), 0.5, 1e-12);
    EXPECT_NEAR(std::norm(st.amp.at(with_occ(0, 1, 2))), 0.5, 1e-12);
}

TEST(LinearMapBasics, TwoPhotonSplitterAmplitudes) {
    // independent photons in a_H, a_V through a splitter of reflectivity R:
    // both-reflected amplitude R, both-transmitted 1-R
    ModeRegister reg({"a_H", "a_V", "out_H", "out_V"}, 4, 4);
    auto ens = single_branch(reg, vacuum_state().created(0).created(1));
    const double R = 0.3;
    FockEnsemble out = apply_map(ens, LinearMap::splitter("a_H", "out_H", R));
    out = apply_map(out, LinearMap::splitter("a_V", "out_V", R));
    const auto& st = out.branches[0].state;
    const OccKey both_c = with_occ(with_occ(0, 0, 1), 1, 1);
    const OccKey both_t = with_occ(with_occ(0, 2, 1), 3, 1);
    EXPECT_NEAR(st.amp.at(both_c).real(), R, 1e-12);
    EXPECT_NEAR(st.amp.at(both_t).real(), 1.0 - R, 1e-12);
}

TEST(LinearMapBasics, NormPreservedOnMultiPhotonStates) {
    ModeRegister reg({"a", "b", "c"}, 6, 6);
    PureState st = vacuum_state().created(0).created(0).created(1).created(2).created(2);
    st.normalize();
    auto ens = single_branch(reg, st);
    const double s = 1.0 / std::sqrt(3.0);
    const complex w = std::exp(complex(0.0, 2.0 * M_PI / 3.0));
    FockEnsemble out = apply_map(
        ens, LinearMap({"a", "b", "c"}, {{s, s, s}, {s, s * w, s * w * w},
                                         {s, s * w * w, s * w * w * w * w}}));
    EXPECT_NEAR(out.branches[0].state.norm2(), 1.0, 1e-10);
}

TEST(LinearMapBasics, OverflowIsAHardError) {
    ModeRegister reg({"a", "b"}, 1, 2);  // two photons may not share a mode
    FockEnsemble ens;
    ens.reg = reg;
    PureState st = vacuum_state().created(0).created(1);
    ens.push(1.0, st);
    const double s = 1.0 / std::sqrt(2.0);
    EXPECT_THROW(apply_map(ens, LinearMap({"a", "b"}, {{s, s}, {s, -s}})),
                 truncation_overflow_error);
}

TEST(Detect, BinomialClickModel) {
    ModeRegister reg({"d", "m"}, 4, 4);
    // one photon at the detector
    auto one = single_branch(reg, vacuum_state().created(0));
    auto r = detect(one, {"d"}, 0.9, HeraldPattern{{{"d", 1}}});
    EXPECT_NEAR(r.probability, 0.9, 1e-15);
    // two photons, exactly one click: C(2,1) eta (1-eta)
    PureState two = vacuum_state().created(0).created(0);
    two.normalize();
    auto pair = single_branch(reg, two);
    r = detect(pair, {"d"}, 0.9, HeraldPattern{{{"d", 1}}});
    EXPECT_NEAR(r.probability, 2.0 * 0.9 * 0.1, 1e-15);
    r = detect(pair, {"d"}, 0.9, HeraldPattern{{{"d", 2}}});
    EXPECT_NEAR(r.probability, 0.81, 1e-15);
    EXPECT_THROW(detect(pair, {"d"}, 0.9, HeraldPattern{{{"m", 1}}}), validation_error);
}

TEST(Detect, ConditionalStateAndCoherenceGrouping) {
    ModeRegister reg({"d", "m"}, 4, 4);
    // (|1>_d |0>_m + |0>_d |1>_m)/sqrt2: a click at d selects the m-vacuum part
    PureState st;
    st.add(with_occ(0, 0, 1), 1.0 / std::sqrt(2.0));
    st.add(with_occ(0, 1, 1), 1.0 / std::sqrt(2.0));
    auto ens = single_branch(reg, st);
    auto r = detect(ens, {"d"}, 0.8, HeraldPattern{{{"d", 1}}});
    EXPECT_NEAR(r.probability, 0.4, 1e-15);
    ASSERT_EQ(r.conditional.branches.size(), 1u);
    EXPECT_NEAR(std::abs(r.conditional.branches[0].state.amp.at(OccKey{0})), 1.0, 1e-12);
}

TEST(Detect, ProbabilityConservationOverCompletePatternSet) {
    // all click patterns over both detectors sum to the ensemble weight
    ModeRegister reg({"d1", "d2", "m"}, 4, 6);
    PureState st = vacuum_state().created(0).created(0).created(1).created(2);
    st.normalize();
    FockEnsemble ens;
    ens.reg = reg;
    ens.push(0.7, st);
    PureState st2 = vacuum_state().created(1);
    ens.push(0.3, st2);
    const double total = total_pattern_probability(ens, {"d1", "d2"}, 0.85);
    EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(Detect, LossModelEquivalence) {
    // splitter-to-loss-mode followed by tracing == binomial model at detection
    for (int photons = 1; photons <= 2; ++photons) {
        for (int clicks = 0; clicks <= photons; ++clicks) {
            const double eta = 0.73;
            ModeRegister reg({"d", "loss"}, 4, 4);
            PureState st = vacuum_state();
            for (int i = 0; i < photons; ++i) st = st.created(0);
            st.normalize();
            auto direct = detect(single_branch(reg, st), {"d"}, eta,
                                 HeraldPattern{{{"d", clicks}}});
            auto lossy = apply_loss(single_branch(reg, st), "d", "loss", eta);
            auto after = detect(lossy, {"d"}, 1.0, HeraldPattern{{{"d", clicks}}});
            EXPECT_NEAR(after.probability, direct.probability, 1e-12)
                << photons << " photons, " << clicks << " clicks";
        }
    }
    // two-mode case: photon pair a,b with loss on both
    ModeRegister reg({"a", "b", "la", "lb"}, 4, 4);
    PureState st = vacuum_state().created(0).created(1);
    const double eta = 0.6;
    auto direct = detect(single_branch(reg, st), {"a", "b"}, eta,
                         HeraldPattern{{{"a", 1}, {"b", 0}}});
    auto lossy = apply_loss(single_branch(reg, st), "a", "la", eta);
    lossy = apply_loss(lossy, "b", "lb", eta);
    auto after = detect(lossy, {"a", "b"}, 1.0, HeraldPattern{{{"a", 1}, {"b", 0}}});
    EXPECT_NEAR(after.probability, direct.probability, 1e-12);
}

TEST(TraceOut, SplitsIncoherentParts) {
    ModeRegister reg({"m", "e"}, 4, 4);
    PureState st;  // (|0>_m|0>_e + |1>_m|1>_e)/sqrt2: tracing e mixes m
    st.add(0, 1.0 / std::sqrt(2.0));
    st.add(with_occ(with_occ(0, 0, 1), 1, 1), 1.0 / std::sqrt(2.0));
    auto traced = trace_out(single_branch(reg, st), {"e"});
    ASSERT_EQ(traced.branches.size(), 2u);
    EXPECT_NEAR(traced.branches[0].weight + traced.branches[1].weight, 1.0, 1e-12);
    EXPECT_NEAR(traced.branches[0].weight, 0.5, 1e-12);
}

TEST(Compress, ReducesBranchesAndPreservesWeightAndPopulations) {
    ModeRegister reg({"a", "b"}, 2, 2);
    FockEnsemble ens;
    ens.reg = reg;
    // many redundant branches of two underlying states
    PureState s1 = vacuum_state().created(0);
    PureState s2;
    s2.add(with_occ(0, 0, 1), std::sqrt(0.5));
    s2.add(with_occ(0, 1, 1), std::sqrt(0.5));
    for (int i = 0; i < 10; ++i) {
        ens.push(0.03, s1);
        ens.push(0.07, s2);
    }
    FockEnsemble c = compress(ens);
    EXPECT_LE(c.branches.size(), 2u);
    EXPECT_NEAR(c.total_weight(), 1.0, 1e-12);
    PureState probe = vacuum_state().created(1);
    EXPECT_NEAR(population(c, probe), population(ens, probe), 1e-12);
    PureState probe2 = vacuum_state().created(0);
    EXPECT_NEAR(population(c, probe2), population(ens, probe2), 1e-12);
}

TEST(SourceEnsemble, DegenerateLimits) {
    FockEnsemble on_demand = build_source_ensemble(0.0, 1.0);
    ASSERT_EQ(on_demand.branches.size(), 1u);
    const ModeRegister& reg = on_demand.reg;
    OccKey expect = with_occ(with_occ(0, reg.index_of("aux_H"), 1),
                             reg.index_of("aux_V"), 1);
    EXPECT_NEAR(std::abs(on_demand.branches[0].state.amp.at(expect)), 1.0, 1e-15);

    FockEnsemble dark = build_source_ensemble(0.0, 0.0);
    ASSERT_EQ(dark.branches.size(), 1u);
    EXPECT_NEAR(std::abs(dark.branches[0].state.amp.at(OccKey{0})), 1.0, 1e-15);
}

TEST(SourceEnsemble, TwelveBranchesWithProductWeights) {
    const double p = 1e-3, q = 0.9;
    FockEnsemble ens = build_source_ensemble(p, q);
    EXPECT_EQ(ens.branches.size(), 12u);
    EXPECT_NEAR(ens.total_weight(), 1.0, 1e-12);
    // branch (one pair, both singles) has weight p q^2
    const ModeRegister& reg = ens.reg;
    const int gH = reg.index_of("g_H"), aH = reg.index_of("aux_H"),
              aV = reg.index_of("aux_V");
    double found = -1.0;
    for (const auto& br : ens.branches) {
        bool pair = false, both = true;
        for (const auto& [k, a] : br.state.amp) {
            const int total = occ_of(k, gH) + occ_of(k, reg.index_of("g_V"));
            pair = pair || total == 1;
            both = both && occ_of(k, aH) == 1 && occ_of(k, aV) == 1;
            pair = pair && total <= 1;
        }
        if (pair && both) found = br.weight;
    }
    EXPECT_NEAR(found, p * q * q, 1e-15);
}

TEST(SourceEnsemble, RejectsOverlargePairProbability) {
    EXPECT_THROW(build_source_ensemble(0.9, 1.0), validation_error);
}
