#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "polyscatter/error.hpp"
#include "polyscatter/farfield.hpp"
#include "polyscatter/field_io.hpp"
#include "polyscatter/oracle.hpp"
#include "support.hpp"

using namespace polyscatter;
using testing::rel_err;

namespace {

ComplexField gaussian(const GridSpec& g, Complex amplitude, double s, const Vec& centre = Vec{}) {
    ComplexField f(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec x = g.point(i) - centre;
        f[i] = amplitude * std::exp(-dot(x, x) / (2 * s * s));
    }
    return f;
}

std::filesystem::path temp_path(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "polyscatter_unit";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("zero potential has zero far field") {
    const GridSpec g(2, 1.0, 32);
    const ComplexField rho(g);
    CHECK(born1_farfield(rho, Direction::planar(0.3), 10.0, 2) == Complex(0.0, 0.0));
    SweepConfig cfg;
    cfg.directions = direction_set(2, 4);
    cfg.kappa_lo = 4.0;
    cfg.kappa_hi = 6.0;
    cfg.solver.born_order = 1;
    for (const auto& r : backscatter_sweep(rho, cfg).records) CHECK(r.value == Complex(0.0, 0.0));
}

TEST_CASE("Born far field of a Gaussian matches its analytic transform") {
    const GridSpec g(2, 1.0, 128);
    const double s = 0.07;
    const ComplexField rho = gaussian(g, 1.0, s);
    for (double kappa : {4.0, 16.0})
        for (int n : {2, 3}) {
            const Direction x = Direction::planar(0.6);
            const Complex want = farfield_prefactor(root_system(kappa, n), 2) * oracle::gaussian_hat(s, 2 * kappa, 2);
            CHECK(rel_err(born1_farfield(rho, x, kappa, n), want) < 1e-8);
        }
    const GridSpec wide(2, 10.0, 320);
    const Complex u = born1_farfield(gaussian(wide, 1.0, 0.5), Direction::planar(0.0), 4.0, 2);
    const Complex pinned(-1.1613126e-6, -1.1613126e-6);
    CHECK(rel_err(farfield_prefactor(root_system(4.0, 2), 2) * oracle::gaussian_hat(0.5, 8.0, 2), pinned) < 1e-6);
    CHECK(rel_err(u, pinned) < 1e-6);
    const GridSpec g3(3, 1.0, 48);
    const double s3 = 0.075;
    const ComplexField rho3 = gaussian(g3, 1.0, s3);
    const Direction x3 = Direction::spherical(0.8, 2.1);
    const Complex want3 = farfield_prefactor(root_system(6.0, 2), 3) * oracle::gaussian_hat(s3, 12.0, 3);
    CHECK(rel_err(born1_farfield(rho3, x3, 6.0, 2), want3) < 1e-6);
}

TEST_CASE("far field of the incident wave is the Born far field") {
    const GridSpec g(2, 1.0, 64);
    const ComplexField rho = gaussian(g, {3.0, -1.0}, 0.1, Vec{{0.05, 0.02, 0.0}});
    ComplexField masked = rho;
    mask_to_safe_ball(masked);
    for (double phi : {0.0, 1.3, 4.0}) {
        const Direction x = Direction::planar(phi);
        const RootSystem rs = root_system(9.0, 2);
        const WaveField ui{incident_wave(-x, 9.0, g), -x, 9.0, 0.0, 0};
        CHECK(rel_err(farfield_from_total(ui, masked, x, rs), born1_farfield(rho, x, 9.0, 2)) < 1e-12);
    }
}

TEST_CASE("real potentials give conjugate-symmetric backscatter") {
    const GridSpec g(2, 1.0, 64);
    const ComplexField rho = gaussian(g, 2.0, 0.12, Vec{{0.1, -0.05, 0.0}});
    const Direction x = Direction::planar(0.9);
    const Complex p = farfield_prefactor(root_system(7.0, 2), 2);
    const Complex a = born1_farfield(rho, x, 7.0, 2) / p, b = born1_farfield(rho, -x, 7.0, 2) / p;
    CHECK(rel_err(a, std::conj(b)) < 1e-13);
}

TEST_CASE("kappa lattice") {
    const KappaLattice lat = make_lattice(8.0, 16.0, 0.25);
    CHECK(lat.count == 33);
    CHECK(lat.kappa_max() == 16.0);
    CHECK(lat.index_of(8.0) == 0);
    CHECK(lat.index_of(12.5) == 18);
    CHECK(lat.index_of(16.0) == 32);
    CHECK_THROWS_AS(lat.index_of(12.6), BandCoverageError);
    CHECK_THROWS_AS(lat.index_of(16.25), BandCoverageError);
    CHECK_THROWS_AS(lat.index_of(7.75), BandCoverageError);
    CHECK_THROWS_AS(make_lattice(8.0, 4.0, 0.25), ValidationError);
    CHECK_THROWS_AS(make_lattice(8.0, 16.0, 0.0), ValidationError);
}

TEST_CASE("direction sets") {
    const auto d2 = direction_set(2, 8);
    REQUIRE(d2.size() == 8);
    CHECK(d2[2].vec()[1] == doctest::Approx(1.0));
    const auto d3 = direction_set(3, 50);
    Vec sum;
    for (const auto& x : d3) {
        CHECK(norm(x.vec()) == doctest::Approx(1.0).epsilon(1e-14));
        sum = sum + x.vec();
    }
    CHECK(std::abs(sum[2]) < 1e-12);
    CHECK_THROWS_AS(direction_set(4, 3), DomainError);
}

TEST_CASE("Born sweep layout matches pointwise far fields") {
    const GridSpec g(2, 1.0, 64);
    const ComplexField rho = gaussian(g, {1.0, 0.5}, 0.1, Vec{{0.03, -0.04, 0.0}});
    SweepConfig cfg;
    cfg.directions = direction_set(2, 5);
    cfg.kappa_lo = 8.0;
    cfg.kappa_hi = 40.0;
    cfg.n = 3;
    cfg.solver.born_order = 1;
    const SweepDataset ds = backscatter_sweep(rho, cfg, 17);
    REQUIRE(ds.lattice.count == 129);
    CHECK(ds.records.size() == 2 * 5 * 129);
    CHECK(ds.seed == 17);
    double worst = 0.0;
    for (std::size_t dir = 0; dir < 5; ++dir) {
        const Direction& x = ds.directions[dir];
        CHECK(ds.direction_index(x) == dir);
        for (std::size_t k = 0; k < ds.lattice.count; k += 7) {
            const double kappa = ds.lattice.at(k);
            const auto& rec = ds.records[2 * (dir * ds.lattice.count + k)];
            CHECK(rec.kappa == kappa);
            CHECK(norm(rec.theta.vec() + x.vec()) == 0.0);
            worst = std::max(worst, rel_err(ds.forward(dir, k), born1_farfield(rho, x, kappa, 3)));
            worst = std::max(worst, rel_err(ds.backward(dir, k), born1_farfield(rho, -x, kappa, 3)));
        }
    }
    CHECK(worst < 1e-9);
    CHECK_THROWS_AS(ds.direction_index(Direction::planar(0.1)), OrientationMissing);
}

TEST_CASE("sweep is linear in the potential") {
    const GridSpec g(2, 1.0, 32);
    const ComplexField a = gaussian(g, 1.0, 0.1), b = gaussian(g, {0.0, 2.0}, 0.15, Vec{{0.1, 0.0, 0.0}});
    ComplexField ab(g);
    for (std::size_t i = 0; i < g.size(); ++i) ab[i] = 2.0 * a[i] - b[i];
    SweepConfig cfg;
    cfg.directions = direction_set(2, 3);
    cfg.kappa_lo = 5.0;
    cfg.kappa_hi = 7.0;
    cfg.solver.born_order = 1;
    const auto da = backscatter_sweep(a, cfg), db = backscatter_sweep(b, cfg), dab = backscatter_sweep(ab, cfg);
    for (std::size_t i = 0; i < dab.records.size(); ++i) {
        const Complex want = 2.0 * da.records[i].value - db.records[i].value;
        CHECK(std::abs(dab.records[i].value - want) < 1e-12 * std::abs(want) + 1e-20);
    }
}

TEST_CASE("Born orders approach the full solve") {
    // Order-j truncation error scales like amplitude^{j+1}.
    const GridSpec g(2, 1.0, 64);
    SweepConfig cfg;
    cfg.directions = direction_set(2, 2);
    cfg.kappa_lo = 6.0;
    cfg.kappa_hi = 7.0;
    cfg.kappa_step = 0.5;
    cfg.solver.tol = 1e-13;
    auto run = [&](double amp, int order) {
        SweepConfig c = cfg;
        c.solver.born_order = order;
        return backscatter_sweep(gaussian(g, amp, 0.1), c);
    };
    auto gap = [](const SweepDataset& a, const SweepDataset& b) {
        double m = 0.0;
        for (std::size_t i = 0; i < a.records.size(); ++i) m = std::max(m, std::abs(a.records[i].value - b.records[i].value));
        return m;
    };
    const double amp = 200.0;
    const auto full1 = run(amp, kFullSolve), full2 = run(2 * amp, kFullSolve);
    const double e1 = gap(run(amp, 1), full1), e1b = gap(run(2 * amp, 1), full2);
    const double e2 = gap(run(amp, 2), full1), e2b = gap(run(2 * amp, 2), full2);
    CHECK(e2 < e1);
    CHECK(e1b / e1 == doctest::Approx(4.0).epsilon(0.1));
    CHECK(e2b / e2 == doctest::Approx(8.0).epsilon(0.15));
    CHECK(full1.born_order == kFullSolve);
}

TEST_CASE("sweep file round trip") {
    const GridSpec g(3, 1.0, 16);
    SweepConfig cfg;
    cfg.directions = direction_set(3, 4);
    cfg.kappa_lo = 3.0;
    cfg.kappa_hi = 4.0;
    cfg.kappa_step = 0.5;
    SweepDataset ds = backscatter_sweep(gaussian(g, {1.0, -1.0}, 0.12), cfg, 99);
    ds.provenance["config_hash"] = "abc";
    const auto path = temp_path("round.pssw");
    write_sweep(path, ds);
    const SweepDataset back = read_sweep(path);
    CHECK(back.d == 3);
    CHECK(back.n == 2);
    CHECK(back.seed == 99);
    CHECK(back.lattice.count == 3);
    CHECK(back.provenance.at("config_hash") == "abc");
    REQUIRE(back.records.size() == ds.records.size());
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        CHECK(back.records[i].value == ds.records[i].value);
        CHECK(back.records[i].kappa == ds.records[i].kappa);
        CHECK(norm(back.records[i].x_hat.vec() - ds.records[i].x_hat.vec()) < 1e-15);
    }

    std::string bytes = read_file_bytes(path);
    write_file_bytes(path, bytes.substr(0, bytes.size() - 8));
    CHECK_THROWS_AS(read_sweep(path), IoError);
    bytes[0] = 'X';
    write_file_bytes(path, bytes);
    CHECK_THROWS_AS(read_sweep(path), IoError);
    CHECK_THROWS_AS(read_sweep(temp_path("missing.pssw")), IoError);
}
