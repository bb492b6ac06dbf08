#include <fractex/fractal.hpp>

#include <fractex/fbm.hpp>

#include <doctest.h>

#include "test_support.hpp"

#include <cmath>

using namespace fractex;

TEST_CASE("constant surface raises DegenerateSurfaceError") {
    CHECK_THROWS_AS(estimate_fd(GrayImage(64, 64, 0.4), 8), DegenerateSurfaceError);
}

TEST_CASE("max_distance bounds are enforced") {
    const GrayImage img = testsupport::random_image(64, 64, 1);
    CHECK_THROWS_AS(estimate_fd(img, 1), PreconditionError);
    CHECK_THROWS_AS(estimate_fd(img, 17), PreconditionError); // 64/4 = 16
    CHECK_NOTHROW(estimate_fd(img, 16));
}

TEST_CASE("default distance scales with the short axis") {
    CHECK(default_fd_distance(GrayImage(512, 512, 0.0)) == 32);
    CHECK(default_fd_distance(GrayImage(128, 256, 0.0)) == 8);
    CHECK(default_fd_distance(GrayImage(16, 16, 0.0)) == 2);
}

TEST_CASE("estimate honours the fd = 3 - hurst identity and clamps") {
    const GrayImage img = testsupport::random_image(64, 64, 2);
    const FdEstimate est = estimate_fd(img, 8);
    CHECK(est.fd == 3.0 - est.hurst);
    CHECK(est.hurst >= 0.0);
    CHECK(est.hurst <= 1.0);
    CHECK(est.fd >= 2.0);
    CHECK(est.fd <= 3.0);
    CHECK(est.r_squared >= 0.0);
    CHECK(est.r_squared <= 1.0);
    CHECK(est.max_distance == 8);
}

TEST_CASE("iid noise has a nearly flat increment curve") {
    // For independent pixels the mean absolute difference does not depend
    // on the pair distance, so the slope is ~0 and fd approaches 3.
    const GrayImage img = testsupport::random_image(256, 256, 3);
    const FdEstimate est = estimate_fd(img, 32);
    CHECK(est.fd >= 2.85);
}

TEST_CASE("fbm surfaces recover the generator hurst on average") {
    double total_err = 0.0;
    for (uint64_t seed = 0; seed < 5; ++seed) {
        const FdEstimate est = estimate_fd(synth_fbm(256, 256, 0.5, 500 + seed), 32);
        total_err += std::abs(est.fd - 2.5);
    }
    CHECK(total_err / 5.0 <= 0.15);
}

TEST_CASE("affine intensity changes leave the estimate unchanged") {
    const GrayImage img = synth_fbm(128, 128, 0.6, 11);
    const FdEstimate base = estimate_fd(img, 8);
    GrayImage scaled(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) scaled.at(x, y) = 3.25 * img.at(x, y) + 17.0;
    }
    const FdEstimate moved = estimate_fd(scaled, 8);
    CHECK(std::abs(moved.fd - base.fd) <= 1e-9);
    CHECK(std::abs(moved.hurst - base.hurst) <= 1e-9);
}

TEST_CASE("a quarter turn leaves the estimate unchanged") {
    const GrayImage img = synth_fbm(128, 128, 0.3, 12);
    const FdEstimate base = estimate_fd(img, 8);
    const FdEstimate turned = estimate_fd(rotate90(img), 8);
    CHECK(std::abs(turned.fd - base.fd) <= 1e-9);
    CHECK(std::abs(turned.log_intercept - base.log_intercept) <= 1e-9);
}

TEST_CASE("mean estimates decrease as hurst increases") {
    double means[3] = {0.0, 0.0, 0.0};
    const double hursts[3] = {0.2, 0.5, 0.8};
    for (int i = 0; i < 3; ++i) {
        for (uint64_t seed = 0; seed < 3; ++seed) {
            means[i] += estimate_fd(synth_fbm(128, 128, hursts[i], 900 + seed), 8).fd;
        }
        means[i] /= 3.0;
    }
    CHECK(means[0] > means[1]);
    CHECK(means[1] > means[2]);
}
