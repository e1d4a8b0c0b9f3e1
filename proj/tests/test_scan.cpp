#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <sstream>
#include <string>

#include "dimer/scan.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::string render_csv(const std::vector<dimer::ScanRecord>& recs) {
    std::string s = dimer::scan_csv_header();
    s += '\n';
    for (const auto& r : recs) {
        s += dimer::to_csv(r);
        s += '\n';
    }
    return s;
}

}  // namespace

TEST_CASE("realize_size") {
    const auto sq = dimer::realize_size(1e6, 1.0);
    CHECK(sq.m == 1000);
    CHECK(sq.n == 1000);
    const auto r2 = dimer::realize_size(5000.0, 2.0);
    CHECK_THAT(static_cast<double>(r2.m) * static_cast<double>(r2.n), WithinRel(5000.0, 0.02));
    CHECK_THAT(static_cast<double>(r2.n) / static_cast<double>(r2.m), WithinRel(2.0, 0.05));
}

TEST_CASE("scan output is byte-identical across runs and thread counts") {
    dimer::AspectScanOptions o;
    o.area = 1600.0;
    o.ratio_min = 0.8;
    o.ratio_max = 1.25;
    o.steps = 9;
    const std::string first = render_csv(dimer::scan_aspect(o));
    const std::string second = render_csv(dimer::scan_aspect(o));
    CHECK(first == second);
    setenv("RESONANCE_THREADS", "3", 1);
    const std::string third = render_csv(dimer::scan_aspect(o));
    unsetenv("RESONANCE_THREADS");
    CHECK(first == third);
}

TEST_CASE("csv schema: header and field count") {
    CHECK(std::string(dimer::scan_csv_header()) ==
          "m,n,p,q,alpha,logAq,log_z_exact,log_z_theory,mean_nc_exact,mean_nc_theory,"
          "var_nc_exact,var_nc_theory,dominant,flags");
    dimer::AspectScanOptions o;
    o.area = 400.0;
    o.steps = 5;
    for (const auto& rec : dimer::scan_aspect(o)) {
        const std::string line = dimer::to_csv(rec);
        CHECK(std::count(line.begin(), line.end(), ',') == 13);
    }
}

TEST_CASE("jsonl mirrors the record") {
    dimer::ScanRecord r;
    r.m = 10;
    r.n = 20;
    r.p = 1;
    r.q = 2;
    r.alpha = 0.5;
    r.dominant = '-';
    r.flags = {"singular", "tie"};
    const std::string j = dimer::to_jsonl(r);
    CHECK(j.find("\"m\":10") != std::string::npos);
    CHECK(j.find("\"alpha\":0.5") != std::string::npos);
    CHECK(j.find("\"dominant\":\"-\"") != std::string::npos);
    CHECK(j.find("\"flags\":\"singular;tie\"") != std::string::npos);
    CHECK(j.find("log_z_exact") == std::string::npos);  // absent fields omitted
}

TEST_CASE("scan_aspect: records carry the inputs and theory near resonance") {
    dimer::AspectScanOptions o;
    o.area = 3600.0;
    o.ratio_min = 0.9;
    o.ratio_max = 1.12;
    o.steps = 7;
    const auto recs = dimer::scan_aspect(o);
    REQUIRE(recs.size() == 7);
    for (const auto& r : recs) {
        CHECK(r.m >= 1);
        CHECK(r.n >= 1);
        REQUIRE(r.log_z_exact.has_value());
        CHECK(std::isfinite(*r.log_z_exact));
        REQUIRE(r.mean_nc_exact.has_value());
    }
    // the middle record sits at ratio 1: resonance detected with p = q = 1
    const auto& mid = recs[3];
    REQUIRE(mid.p.has_value());
    CHECK(*mid.p == 1);
    CHECK(*mid.q == 1);
    REQUIRE(mid.alpha.has_value());
    CHECK_THAT(*mid.alpha, WithinAbs(0.0, 1e-9));
    REQUIRE(mid.log_z_theory.has_value());
    // exact and theory agree to a few percent already at area 3600
    CHECK_THAT(*mid.log_z_theory, WithinRel(*mid.log_z_exact, 0.05));
}

TEST_CASE("scan_melt: deep solid side vanishes, critical point hits the constants") {
    dimer::MeltScanOptions o;
    o.m = 400;
    o.n = 400;
    o.p = 1;
    o.q = 1;
    o.log_aq_min = -8.0;
    o.log_aq_max = 0.0;
    o.steps = 3;
    o.with_exact = false;
    const auto recs = dimer::scan_melt(o);
    REQUIRE(recs.size() == 3);
    CHECK(*recs[0].mean_nc_theory < 1e-4);  // A -> 0+: no paths
    const double k_logz =
        dimer::zeta(1.5) * (1.0 - std::pow(2.0, -0.5)) / (2.0 * std::sqrt(3.14159265358979324));
    CHECK_THAT(*recs[2].log_z_theory, WithinRel(k_logz, 1e-9));
    for (const auto& r : recs) {
        CHECK(r.flags.empty());  // A <= 1 at alpha = 0: no singular branch dominates
        CHECK(std::isfinite(*r.log_z_theory));
        CHECK(*r.dominant == '-');
    }
}

TEST_CASE("scan_alpha: dominance, markers, and the exact overlay") {
    dimer::AlphaScanOptions o;
    o.log_aq = 1.0;  // A^q = e
    o.alpha_min = 0.0;
    o.alpha_max = 5.0;
    o.steps = 17;
    o.m = 144;
    o.n = 144;
    o.p = 1;
    o.q = 1;
    o.with_exact = true;
    const auto recs = dimer::scan_alpha(o);
    REQUIRE(recs.size() >= 2 * 17);

    // marker rows at the nonanalyticity alphas carry the singular flag
    int singular_plus = 0, singular_minus = 0;
    for (const auto& r : recs) {
        REQUIRE(r.alpha.has_value());
        if (!r.flags.empty() &&
            std::find(r.flags.begin(), r.flags.end(), "singular") != r.flags.end()) {
            if (*r.dominant == '+') ++singular_plus;
            if (*r.dominant == '-') ++singular_minus;
        }
    }
    CHECK(singular_plus >= 2);   // alpha = 0, pi, ... for the plus branch
    CHECK(singular_minus >= 2);  // alpha = pi/2, 3 pi/2, ... for the minus branch

    // crossover markers: ties where the branches exchange dominance
    bool any_tie = false;
    for (const auto& r : recs)
        if (std::find(r.flags.begin(), r.flags.end(), "tie") != r.flags.end()) any_tie = true;
    CHECK(any_tie);

    // exact overlay present and finite
    int with_exact = 0;
    for (const auto& r : recs)
        if (r.log_z_exact && std::isfinite(*r.log_z_exact)) ++with_exact;
    CHECK(with_exact >= static_cast<int>(recs.size()) / 2);

    // A^q < 1: the minus branch dominates everywhere
    dimer::AlphaScanOptions o2 = o;
    o2.log_aq = -1.0;
    o2.steps = 9;
    o2.with_exact = false;
    const auto recs2 = dimer::scan_alpha(o2);
    for (std::size_t i = 0; i + 1 < recs2.size(); i += 2) {
        const auto& plus = recs2[i];
        const auto& minus = recs2[i + 1];
        REQUIRE(*plus.dominant == '+');
        REQUIRE(*minus.dominant == '-');
        CHECK(*minus.log_z_theory > *plus.log_z_theory);
    }
}
