#include "shjb/field.hpp"
#include "shjb/field_io.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace shjb;
using namespace shjb::testutil;

TEST_CASE("grid validation") {
    CHECK_THROWS(make_grid(0, 16));
    CHECK_THROWS(make_grid(1, 6));
    CHECK_THROWS(make_grid(1, 48)); // not a power of two
    TorusGrid g = make_grid(2, 16);
    CHECK(g.total_points() == 256);
    CHECK(g.spacing() == doctest::Approx(two_pi / 16));
}

TEST_CASE("constant field transforms to the zero mode only") {
    TorusGrid g = make_grid(1, 64);
    SpectralField F = to_spectral(make_field(g, 3.0));
    std::vector<int> xi{0};
    CHECK(std::abs(F.coefficients[mode_index(g, xi)] -
                   std::complex<double>(3.0 * std::sqrt(two_pi), 0.0)) < 1e-12);
    double off_mode = 0.0;
    for (std::size_t j = 1; j < F.coefficients.size(); ++j)
        off_mode = std::max(off_mode, std::abs(F.coefficients[j]));
    CHECK(off_mode < 1e-12);
}

TEST_CASE("sin has two modes of equal magnitude") {
    TorusGrid g = make_grid(1, 64);
    SpectralField F = to_spectral(sin_field(g));
    std::vector<int> plus{1}, minus{-1};
    double mag_p = std::abs(F.coefficients[mode_index(g, plus)]);
    double mag_m = std::abs(F.coefficients[mode_index(g, minus)]);
    CHECK(mag_p == doctest::Approx(mag_m).epsilon(1e-12));
    CHECK(mag_p == doctest::Approx(std::sqrt(3.14159265358979323846 / 2)).epsilon(1e-12));
}

TEST_CASE("round trip and Parseval on random fields") {
    for (auto [dim, N] : {std::pair{1, 64}, std::pair{2, 16}}) {
        TorusGrid g = make_grid(dim, N);
        SpatialField f = random_band_limited(g, 42 + dim, N / 4);
        SpatialField back = to_physical(to_spectral(f));
        CHECK(max_abs_diff(f, back) <= 1e-12 * std::max(1.0, sup_norm(f)));
        CHECK(l2_norm(f) == doctest::Approx(l2_norm(to_spectral(f))).epsilon(1e-12));
    }
}

TEST_CASE("to_spectral rejects non-finite input") {
    TorusGrid g = make_grid(1, 8);
    SpatialField f = make_field(g, 1.0);
    f.values[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS(to_spectral(f));
}

TEST_CASE("derivative on analytic fields") {
    TorusGrid g = make_grid(1, 128);
    SpatialField cos1 = sample(g, [](std::span<const double> x) { return std::cos(x[0]); });
    CHECK(max_abs_diff(to_physical(derivative(to_spectral(sin_field(g)), 0)), cos1) < 1e-12);

    SpatialField c = make_field(g, 7.0);
    CHECK(sup_norm(to_physical(derivative(to_spectral(c), 0))) < 1e-12);

    SpatialField sin3 = sin_field(g, 1.0, 3);
    SpatialField want =
        sample(g, [](std::span<const double> x) { return 3.0 * std::cos(3.0 * x[0]); });
    CHECK(max_abs_diff(to_physical(derivative(to_spectral(sin3), 0)), want) <= 1e-12);
}

TEST_CASE("derivative zeroes the Nyquist mode") {
    TorusGrid g = make_grid(1, 32);
    SpectralField F{g, std::vector<std::complex<double>>(g.total_points(), 0.0)};
    std::vector<int> nyquist{-16};
    F.coefficients[mode_index(g, nyquist)] = 1.0;
    SpectralField dF = derivative(F, 0);
    for (const auto& c : dF.coefficients) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("laplacian and fractional powers") {
    TorusGrid g = make_grid(1, 64);
    SpectralField S = to_spectral(sin_field(g));
    CHECK(max_abs_diff(to_physical(laplacian(S)), -1.0 * sin_field(g)) < 1e-12);
    CHECK(max_abs_diff(to_physical(fractional_lambda(S, 2.0)), sin_field(g)) < 1e-12);

    SpectralField M{g, std::vector<std::complex<double>>(g.total_points(), 0.0)};
    std::vector<int> two{2};
    M.coefficients[mode_index(g, two)] = {0.5, -0.25};
    SpectralField L = fractional_lambda(M, 1.5);
    CHECK(std::abs(L.coefficients[mode_index(g, two)] -
                   std::complex<double>(0.5, -0.25) * std::pow(2.0, 1.5)) < 1e-12);
    CHECK_THROWS(fractional_lambda(M, -0.5));
}

TEST_CASE("linear symbol values and shape") {
    TorusGrid g = make_grid(1, 64);
    auto sym = linear_symbol(g, 1.0, 0.0, 7);
    std::vector<int> xi{1};
    CHECK(sym[mode_index(g, xi)] == doctest::Approx(-1.0));
    CHECK(sym[0] == 0.0);

    auto sym2 = linear_symbol(g, 0.1, 1e-10, 7);
    std::vector<int> two{2};
    CHECK(sym2[mode_index(g, two)] ==
          doctest::Approx(-0.1 * 4.0 - 1e-10 * std::pow(2.0, 14)).epsilon(1e-14));

    for (double s : sym2) CHECK(s <= 0.0);
    for (int q = 0; q + 1 < 32; ++q) {
        std::vector<int> lo{q}, hi{q + 1};
        CHECK(sym2[mode_index(g, hi)] < sym2[mode_index(g, lo)]);
    }
    CHECK_THROWS(linear_symbol(g, 0.1, 1e-10, 6)); // even order rejected
}

TEST_CASE("sobolev and sup norms against closed forms") {
    TorusGrid g = make_grid(1, 128);
    const double pi = 3.14159265358979323846;

    SpatialField c = make_field(g, -2.5);
    for (double k : {0.0, 1.0, 3.0})
        CHECK(sobolev_norm(c, k) == doctest::Approx(2.5 * std::sqrt(two_pi)).epsilon(1e-12));

    for (double k : {0.0, 2.0, 3.0})
        CHECK(sobolev_norm(sin_field(g), k) ==
              doctest::Approx(std::sqrt(std::pow(2.0, k) * pi)).epsilon(1e-12));

    CHECK(sup_norm(sin_field(g, 2.0)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(grad_sup_norm(sin_field(g)) - 1.0) <= 1e-10);
}

TEST_CASE("sobolev norm in two dimensions") {
    TorusGrid g = make_grid(2, 16);
    CHECK(sobolev_norm(make_field(g, 1.5), 2.0) ==
          doctest::Approx(1.5 * two_pi).epsilon(1e-12));
}

TEST_CASE("dealias cutoff") {
    TorusGrid g = make_grid(1, 128);
    SpectralField F{g, std::vector<std::complex<double>>(g.total_points(), 0.0)};
    std::vector<int> one{1}, sixty{60}, keep{42};
    F.coefficients[mode_index(g, one)] = 1.0;
    F.coefficients[mode_index(g, sixty)] = 2.0;
    F.coefficients[mode_index(g, keep)] = 3.0;
    SpectralField D = dealias(F);
    CHECK(D.coefficients[mode_index(g, one)] == std::complex<double>(1.0));
    CHECK(D.coefficients[mode_index(g, sixty)] == std::complex<double>(0.0));
    CHECK(D.coefficients[mode_index(g, keep)] == std::complex<double>(3.0));
}

TEST_CASE("dealiased square of sin(40x) has no alias at -48") {
    TorusGrid g = make_grid(1, 128);
    SpatialField s40 = sin_field(g, 1.0, 40);

    // raw grid square aliases the 80 mode onto -48
    SpatialField naive = s40;
    for (std::size_t j = 0; j < naive.values.size(); ++j) naive.values[j] *= s40.values[j];
    std::vector<int> alias{-48};
    CHECK(std::abs(to_spectral(naive).coefficients[mode_index(g, alias)]) > 0.1);

    // 2/3-rule product keeps only the resolvable part of sin^2 = 1/2 - cos(80x)/2
    SpatialField p = multiply_dealiased(s40, s40);
    CHECK(std::abs(to_spectral(p).coefficients[mode_index(g, alias)]) < 1e-12);
    CHECK(max_abs_diff(p, make_field(g, 0.5)) < 1e-12);
}

TEST_CASE("multiplier operators commute on single modes") {
    TorusGrid g = make_grid(1, 32);
    for (int mode : {1, 2, 5, 9}) {
        SpectralField F{g, std::vector<std::complex<double>>(g.total_points(), 0.0)};
        std::vector<int> xi{mode};
        F.coefficients[mode_index(g, xi)] = 1.0;
        SpectralField a = derivative(laplacian(F), 0);
        SpectralField b = laplacian(derivative(F, 0));
        for (std::size_t j = 0; j < a.coefficients.size(); ++j)
            CHECK(a.coefficients[j] == b.coefficients[j]);
    }
}

TEST_CASE("reality is preserved by the multiplier operators") {
    TorusGrid g = make_grid(1, 64);
    SpatialField f = random_band_limited(g, 7, 20);
    SpectralField F = to_spectral(f);
    double scale = l2_norm(F);
    CHECK(max_imag_part(derivative(F, 0)) < 1e-12 * scale);
    CHECK(max_imag_part(laplacian(F)) < 1e-12 * scale);
    CHECK(max_imag_part(fractional_lambda(F, 1.3)) < 1e-12 * scale);
    CHECK(max_imag_part(dealias(F)) < 1e-12 * scale);
}

TEST_CASE("binary and text field io round trip bit-exactly") {
    TorusGrid g = make_grid(1, 32);
    SpatialField f = random_band_limited(g, 11, 10);

    std::stringstream bin(std::ios::in | std::ios::out | std::ios::binary);
    write_binary(bin, f);
    auto back = std::get<SpatialField>(read_binary(bin));
    CHECK(back.values == f.values);

    std::stringstream txt;
    write_text(txt, f);
    auto back_txt = std::get<SpatialField>(read_text(txt));
    CHECK(back_txt.values == f.values);

    SpectralField F = to_spectral(f);
    std::stringstream binf(std::ios::in | std::ios::out | std::ios::binary);
    write_binary(binf, F);
    auto back_spec = std::get<SpectralField>(read_binary(binf));
    CHECK(back_spec.coefficients == F.coefficients);

    std::stringstream txtf;
    write_text(txtf, F);
    auto back_spec_txt = std::get<SpectralField>(read_text(txtf));
    CHECK(back_spec_txt.coefficients == F.coefficients);
}

TEST_CASE("field io rejects non-finite values") {
    TorusGrid g = make_grid(1, 8);
    SpatialField f = make_field(g, 0.0);
    f.values[0] = std::numeric_limits<double>::infinity();
    std::stringstream os;
    CHECK_THROWS(write_binary(os, f));
    CHECK_THROWS(write_text(os, f));
}
