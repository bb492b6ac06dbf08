#include <fractex/best_basis.hpp>

#include <fractex/fbm.hpp>
#include <fractex/fractal.hpp>

#include <doctest.h>

#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace fractex;

namespace {

// Published FD scores of one fibroblastic sample, levels 1..8 in
// LL, LH, HL, HH order; the reference fixture for injected-score tests.
constexpr double kReferenceScores[8][4] = {
    {2.5038, 2.6797, 2.7105, 2.7897}, {2.9346, 2.8918, 2.8994, 2.8239},
    {2.9585, 2.9655, 2.9669, 2.9722}, {2.9877, 2.9857, 2.9860, 2.9838},
    {2.9930, 2.9937, 2.9939, 2.9945}, {2.9975, 2.9972, 2.9973, 2.9970},
    {2.9986, 2.9987, 2.9987, 2.9988}, {2.9994, 2.9994, 2.9994, 2.9994},
};

SubbandScorer reference_scorer() {
    return [](const GrayImage&, int level, Quadrant q) {
        return kReferenceScores[level - 1][static_cast<size_t>(q)];
    };
}

DecompositionTrace run_reference(int max_level, double lambda,
                                 std::optional<double> cutoff = std::nullopt,
                                 int image_size = 64) {
    const GrayImage img = testsupport::random_image(image_size, image_size, 77);
    BestBasisOptions options;
    options.max_level = max_level;
    options.lambda = lambda;
    options.noise_cutoff = cutoff;
    return select_best_basis_with(img, db8_filters(), reference_scorer(), options,
                                  SelectionCriterion::kFractalDimension);
}

} // namespace

TEST_CASE("reference scores select the HH, LL, HH path") {
    const DecompositionTrace trace = run_reference(3, 0.0);
    CHECK(trace.termination_reason == TerminationReason::kMaxDepth);
    CHECK(trace.depth == 3);
    REQUIRE(trace.levels.size() == 3);
    const auto path = trace.selection_path();
    REQUIRE(path.size() == 3);
    CHECK(path[0] == Quadrant::HH);
    CHECK(path[1] == Quadrant::LL);
    CHECK(path[2] == Quadrant::HH);
}

TEST_CASE("lambda 0.012 terminates at computed level 4 with depth 3") {
    const DecompositionTrace trace = run_reference(8, 0.012);
    CHECK(trace.termination_reason == TerminationReason::kThresholdReached);
    REQUIRE(trace.levels.size() == 4);
    CHECK(trace.depth == 3);
    CHECK(trace.levels[2].spread > 0.012);  // 2.9722 - 2.9585 = 0.0137
    CHECK(trace.levels[3].spread <= 0.012); // 2.9877 - 2.9838 = 0.0039

    const FeatureVector fv = extract_feature_vector(trace, FeatureMode::kSelectedOnly);
    REQUIRE(fv.values.size() == 3);
    CHECK(fv.values[0] == 2.7897);
    CHECK(fv.values[1] == 2.9346);
    CHECK(fv.values[2] == 2.9722);
    CHECK(fv.names[0] == "fd_L1_sel");
    CHECK(fv.names[2] == "fd_L3_sel");
}

TEST_CASE("lambda 0.05 stops one level earlier") {
    const DecompositionTrace trace = run_reference(8, 0.05);
    REQUIRE(trace.levels.size() == 3); // level-3 spread 0.0137 <= 0.05
    CHECK(trace.depth == 2);
    const FeatureVector fv = extract_feature_vector(trace, FeatureMode::kSelectedOnly);
    REQUIRE(fv.values.size() == 2);
    CHECK(fv.values[0] == 2.7897);
    CHECK(fv.values[1] == 2.9346);
}

TEST_CASE("all-four mode flattens each level in quadrant order") {
    const DecompositionTrace trace = run_reference(3, 0.0);
    const FeatureVector fv = extract_feature_vector(trace, FeatureMode::kAllFour);
    REQUIRE(fv.values.size() == 12);
    CHECK(fv.values[0] == 2.5038);
    CHECK(fv.values[1] == 2.6797);
    CHECK(fv.values[2] == 2.7105);
    CHECK(fv.values[3] == 2.7897);
    CHECK(fv.names[0] == "fd_L1_LL");
    CHECK(fv.names[3] == "fd_L1_HH");
    CHECK(fv.names[11] == "fd_L3_HH");

    const FeatureVector sel = extract_feature_vector(trace, FeatureMode::kSelectedOnly);
    for (int level = 0; level < 3; ++level) {
        double mx = fv.values[static_cast<size_t>(level) * 4];
        for (int q = 1; q < 4; ++q) {
            mx = std::max(mx, fv.values[static_cast<size_t>(level) * 4 + q]);
        }
        CHECK(sel.values[static_cast<size_t>(level)] == mx);
    }
}

TEST_CASE("max_level 1 gives a single max-depth entry") {
    const DecompositionTrace trace = run_reference(1, 0.0);
    CHECK(trace.levels.size() == 1);
    CHECK(trace.termination_reason == TerminationReason::kMaxDepth);
    CHECK(trace.depth == 1);
}

TEST_CASE("noise cutoff fires when all four scores reach it") {
    // Level 4 keeps one score below 2.985 (2.9838); level 5 is the first
    // with all four at or above the cutoff.
    const DecompositionTrace trace = run_reference(8, 0.0, 2.985, 128);
    CHECK(trace.termination_reason == TerminationReason::kNoiseCutoff);
    REQUIRE(trace.levels.size() == 5);
    CHECK(trace.depth == 4);
}

TEST_CASE("threshold check precedes the noise cutoff") {
    const DecompositionTrace trace = run_reference(8, 0.012, 2.985, 128);
    CHECK(trace.termination_reason == TerminationReason::kThresholdReached);
    CHECK(trace.levels.size() == 4);
}

TEST_CASE("with lambda 0 and no cutoff the depth always equals max_level") {
    for (int max_level = 1; max_level <= 4; ++max_level) {
        const DecompositionTrace trace = run_reference(max_level, 0.0);
        CHECK(trace.depth == max_level);
        CHECK(trace.levels.size() == static_cast<size_t>(max_level));
    }
}

TEST_CASE("depth is monotone non-increasing in lambda") {
    const DecompositionTrace full = run_reference(4, 0.0);
    int prev_depth = 4;
    for (double lambda : {0.0, 0.002, 0.0039, 0.012, 0.05, 0.111, 0.3}) {
        const DecompositionTrace t = truncate_trace(full, lambda, std::nullopt);
        CHECK(t.depth <= prev_depth);
        prev_depth = t.depth;
    }
}

TEST_CASE("truncate_trace reproduces a direct threshold run") {
    const DecompositionTrace full = run_reference(4, 0.0);
    for (double lambda : {0.012, 0.05, 0.2}) {
        const DecompositionTrace direct = run_reference(4, lambda);
        const DecompositionTrace cut = truncate_trace(full, lambda, std::nullopt);
        CHECK(cut.termination_reason == direct.termination_reason);
        CHECK(cut.depth == direct.depth);
        REQUIRE(cut.levels.size() == direct.levels.size());
        for (size_t i = 0; i < cut.levels.size(); ++i) {
            CHECK(cut.levels[i].selected == direct.levels[i].selected);
            CHECK(cut.levels[i].spread == direct.levels[i].spread);
        }
    }
    const DecompositionTrace untouched = truncate_trace(full, 0.0, std::nullopt);
    CHECK(untouched.depth == full.depth);
    CHECK(untouched.termination_reason == full.termination_reason);
}

TEST_CASE("ties break in fixed LL, LH, HL, HH order") {
    const GrayImage img = testsupport::random_image(16, 16, 5);
    BestBasisOptions options;
    options.max_level = 1;

    SubbandScorer equal = [](const GrayImage&, int, Quadrant) { return 1.0; };
    DecompositionTrace t = select_best_basis_with(img, db8_filters(), equal, options,
                                                  SelectionCriterion::kFractalDimension);
    CHECK(t.levels[0].selected == Quadrant::LL);
    CHECK(t.levels[0].spread == 0.0);
    CHECK(t.termination_reason == TerminationReason::kMaxDepth);

    SubbandScorer pair = [](const GrayImage&, int, Quadrant q) {
        return (q == Quadrant::LH || q == Quadrant::HH) ? 5.0 : 3.0;
    };
    t = select_best_basis_with(img, db8_filters(), pair, options,
                               SelectionCriterion::kFractalDimension);
    CHECK(t.levels[0].selected == Quadrant::LH);
}

TEST_CASE("a level-1 threshold hit leaves an empty feature vector") {
    const GrayImage img = testsupport::random_image(16, 16, 6);
    BestBasisOptions options;
    options.max_level = 3;
    options.lambda = 0.5;
    SubbandScorer equal = [](const GrayImage&, int, Quadrant) { return 1.0; };
    const DecompositionTrace t = select_best_basis_with(img, db8_filters(), equal, options,
                                                        SelectionCriterion::kFractalDimension);
    CHECK(t.depth == 0);
    CHECK(t.levels.size() == 1);
    CHECK(t.termination_reason == TerminationReason::kThresholdReached);
    CHECK_THROWS_AS(extract_feature_vector(t, FeatureMode::kSelectedOnly), PreconditionError);
}

TEST_CASE("search parameters are validated") {
    const GrayImage img = testsupport::random_image(16, 16, 7);
    CHECK_THROWS_AS(select_best_basis(img, SelectionCriterion::kEnergy, 0, 0.0),
                    PreconditionError);
    CHECK_THROWS_AS(select_best_basis(img, SelectionCriterion::kEnergy, 9, 0.0),
                    PreconditionError);
    CHECK_THROWS_AS(select_best_basis(img, SelectionCriterion::kEnergy, 1, -0.1),
                    PreconditionError);
    CHECK_THROWS_AS(truncate_trace(DecompositionTrace{}, -1.0, std::nullopt), PreconditionError);
}

TEST_CASE("degenerate surfaces propagate from the fd scorer") {
    CHECK_THROWS_AS(
        select_best_basis(GrayImage(64, 64, 0.5), SelectionCriterion::kFractalDimension, 1, 0.0),
        DegenerateSurfaceError);
}

TEST_CASE("fd selection path is invariant under intensity scaling") {
    const GrayImage img = synth_fbm(64, 64, 0.5, 88);
    GrayImage scaled(64, 64);
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) scaled.at(x, y) = 4.0 * img.at(x, y) + 2.0;
    }
    const DecompositionTrace a =
        select_best_basis(img, SelectionCriterion::kFractalDimension, 2, 0.0);
    const DecompositionTrace b =
        select_best_basis(scaled, SelectionCriterion::kFractalDimension, 2, 0.0);
    REQUIRE(a.levels.size() == b.levels.size());
    for (size_t i = 0; i < a.levels.size(); ++i) {
        CHECK(a.levels[i].selected == b.levels[i].selected);
    }
}

TEST_CASE("rough detail content pulls the fd criterion into hh") {
    // Smooth low-frequency ramp plus fine noise: the level-1 HH subband
    // keeps only the rough part, so its FD tops the other quadrants.
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        GrayImage img(128, 128);
        for (int y = 0; y < 128; ++y) {
            for (int x = 0; x < 128; ++x) {
                const double smooth =
                    0.5 + 0.4 * std::sin(2.0 * 3.14159265358979323846 * x / 128.0) *
                              std::sin(2.0 * 3.14159265358979323846 * y / 128.0);
                img.at(x, y) = 0.8 * smooth + 0.2 * dist(rng);
            }
        }
        const DecompositionTrace t =
            select_best_basis(img, SelectionCriterion::kFractalDimension, 1, 0.0);
        CHECK(t.levels[0].selected == Quadrant::HH);
    }
}

TEST_CASE("energy criterion tags the trace and favours the lowpass band") {
    const GrayImage img = synth_fbm(64, 64, 0.5, 99);
    const DecompositionTrace t = select_best_basis(img, SelectionCriterion::kEnergy, 2, 0.0);
    CHECK(t.criterion == SelectionCriterion::kEnergy);
    CHECK(t.levels[0].selected == Quadrant::LL);
    CHECK(t.depth == 2);
}

TEST_CASE("observer sees every computed level in order") {
    const GrayImage img = testsupport::random_image(64, 64, 13);
    BestBasisOptions options;
    options.max_level = 3;
    std::vector<int> seen;
    LevelObserver observer = [&seen](const SubbandSet& sub, const LevelScores& ls) {
        CHECK(sub.level == ls.level);
        CHECK(static_cast<int>(sub.path.size()) == ls.level - 1);
        seen.push_back(ls.level);
    };
    select_best_basis_with(img, db8_filters(), reference_scorer(), options,
                           SelectionCriterion::kFractalDimension, observer);
    CHECK(seen == std::vector<int>{1, 2, 3});
}

TEST_CASE("trace report is line oriented and exact") {
    const DecompositionTrace trace = run_reference(3, 0.0);
    const std::string report = trace_report(trace);
    CHECK(report.find("criterion fd\n") == 0);
    CHECK(report.find("level 1 LL 2.5038 LH 2.6797 HL 2.7105 HH 2.7897 selected HH spread "
                      "0.2859\n") != std::string::npos);
    CHECK(report.find("termination max_depth\n") != std::string::npos);
    CHECK(report.find("depth 3\n") != std::string::npos);
}
