// Command-line front end: parameter sweeps over torus aspect ratio, the
// resonance window, and the melting parameter, plus the built-in
// verification suite binding the three computation routes.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dimer/enumerate.hpp"
#include "dimer/polylog.hpp"
#include "dimer/scan.hpp"
#include "dimer/verify.hpp"

namespace {

struct OutputTarget {
    std::ofstream file;
    std::ostream* os = &std::cout;

    void open(const std::string& path) {
        if (path == "-") return;
        file.open(path);
        if (!file) throw CLI::ValidationError("--out", "cannot open " + path);
        os = &file;
    }
};

void emit_records(const std::vector<dimer::ScanRecord>& recs, const std::string& format,
                  std::ostream& os) {
    if (format == "csv") {
        os << dimer::scan_csv_header() << '\n';
        for (const auto& r : recs) os << dimer::to_csv(r) << '\n';
    } else {
        for (const auto& r : recs) os << dimer::to_jsonl(r) << '\n';
    }
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out;
}

int run_verify(dimer::VerifyLevel level, std::ostream& os) {
    const std::vector<dimer::CheckResult> results = dimer::run_acceptance(level);
    bool all_pass = true;
    for (const auto& r : results) {
        char buf[512];
        std::snprintf(buf, sizeof buf,
                      "{\"id\":%d,\"check\":\"%s\",\"measured\":%.17g,\"target\":%.17g,"
                      "\"pass\":%s,\"seconds\":%.3f,\"note\":\"%s\"}",
                      r.id, json_escape(r.name).c_str(), r.measured, r.target,
                      r.pass ? "true" : "false", r.seconds, json_escape(r.note).c_str());
        os << buf << '\n';
        std::cerr << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ": " << r.name << " (measured "
                  << r.measured << (r.exceed_target ? " > " : " <= ") << r.target << " wanted)\n";
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"critical honeycomb-dimer / lattice-path partition functions on a torus"};
    app.require_subcommand(1);

    std::string format = "csv", out_path = "-";
    auto add_io = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "jsonl"}));
        cmd->add_option("--out", out_path, "output path or - for stdout");
    };

    // --- scan-aspect ---
    dimer::AspectScanOptions aspect;
    std::vector<double> weights = {1.0, 0.5, 0.5};
    auto* cmd_aspect = app.add_subcommand("scan-aspect", "sweep the torus aspect ratio");
    cmd_aspect->add_option("--area", aspect.area, "target area m*n")->check(CLI::Range(1.0, 1e8));
    cmd_aspect->add_option("--ratio-min", aspect.ratio_min, "smallest n/m");
    cmd_aspect->add_option("--ratio-max", aspect.ratio_max, "largest n/m");
    cmd_aspect->add_option("--ratio-steps", aspect.steps, "number of ratio points");
    cmd_aspect->add_option("--weights", weights, "edge weights a,b,c")
        ->delimiter(',')
        ->expected(3);
    cmd_aspect->add_option("--qmax", aspect.qmax, "rational-detection bound");
    cmd_aspect->add_option("--alpha-max", aspect.alpha_max, "theory emitted when |alpha| below this");
    add_io(cmd_aspect);

    // --- scan-alpha ---
    dimer::AlphaScanOptions alpha_opts;
    bool alpha_no_exact = false;
    auto* cmd_alpha = app.add_subcommand("scan-alpha", "sweep alpha at fixed A^q");
    cmd_alpha->add_option("--logAq", alpha_opts.log_aq, "log A^q")->required();
    cmd_alpha->add_option("--alpha-min", alpha_opts.alpha_min, "start of the alpha range");
    cmd_alpha->add_option("--alpha-max", alpha_opts.alpha_max, "end of the alpha range");
    cmd_alpha->add_option("--alpha-steps", alpha_opts.steps, "number of sweep points");
    cmd_alpha->add_option("--m", alpha_opts.m, "horizontal period");
    cmd_alpha->add_option("--n", alpha_opts.n, "vertical period");
    cmd_alpha->add_option("--p", alpha_opts.p, "winding numerator");
    cmd_alpha->add_option("--q", alpha_opts.q, "winding denominator");
    cmd_alpha->add_flag("--no-exact", alpha_no_exact, "skip the exact-route overlay");
    add_io(cmd_alpha);

    // --- scan-melt ---
    dimer::MeltScanOptions melt;
    bool melt_no_exact = false;
    auto* cmd_melt = app.add_subcommand("scan-melt", "sweep A^q through 1 at alpha = 0");
    cmd_melt->add_option("--m", melt.m, "horizontal period");
    cmd_melt->add_option("--n", melt.n, "vertical period");
    cmd_melt->add_option("--p", melt.p, "winding numerator");
    cmd_melt->add_option("--q", melt.q, "winding denominator");
    cmd_melt->add_option("--logAq-min", melt.log_aq_min, "start of log A^q range");
    cmd_melt->add_option("--logAq-max", melt.log_aq_max, "end of log A^q range");
    cmd_melt->add_option("--steps", melt.steps, "number of sweep points");
    cmd_melt->add_flag("--no-exact", melt_no_exact, "skip the exact-route overlay");
    add_io(cmd_melt);

    // --- verify ---
    std::string level = "quick";
    auto* cmd_verify = app.add_subcommand("verify", "run the verification suite");
    cmd_verify->add_option("--level", level, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}));
    cmd_verify->add_option("--out", out_path, "report path or - for stdout");

    // --- hidden debugging commands ---
    double pe_re = 0.0, pe_im = 0.0;
    std::string pe_nu = "1", pe_side = "below";
    auto* cmd_polylog = app.add_subcommand("polylog-eval", "evaluate Li_nu at a point");
    cmd_polylog->group("");  // hidden
    cmd_polylog->add_option("--nu", pe_nu, "order: integer <= 1 or 3/2, 1/2, -1/2")->required();
    cmd_polylog->add_option("--re", pe_re, "Re z")->required();
    cmd_polylog->add_option("--im", pe_im, "Im z");
    cmd_polylog->add_option("--side", pe_side, "branch side on the cut")
        ->check(CLI::IsMember({"above", "below"}));

    long long ec_m = 1, ec_n = 1;
    auto* cmd_enum = app.add_subcommand("enum-covers", "dump enumerated covers");
    cmd_enum->group("");  // hidden
    cmd_enum->add_option("m", ec_m, "horizontal period")->required();
    cmd_enum->add_option("n", ec_n, "vertical period")->required();
    cmd_enum->add_option("--out", out_path, "output path or - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        OutputTarget out;
        out.open(out_path);
        if (cmd_aspect->parsed()) {
            aspect.a = weights[0];
            aspect.b = weights[1];
            aspect.c = weights[2];
            emit_records(dimer::scan_aspect(aspect), format, *out.os);
            return 0;
        }
        if (cmd_alpha->parsed()) {
            alpha_opts.with_exact = !alpha_no_exact;
            emit_records(dimer::scan_alpha(alpha_opts), format, *out.os);
            return 0;
        }
        if (cmd_melt->parsed()) {
            melt.with_exact = !melt_no_exact;
            emit_records(dimer::scan_melt(melt), format, *out.os);
            return 0;
        }
        if (cmd_verify->parsed()) {
            return run_verify(level == "full" ? dimer::VerifyLevel::full : dimer::VerifyLevel::quick,
                              *out.os);
        }
        if (cmd_polylog->parsed()) {
            const dimer::cplx z{pe_re, pe_im};
            const dimer::BranchSide side =
                pe_side == "above" ? dimer::BranchSide::above_cut : dimer::BranchSide::below_cut;
            dimer::cplx v;
            if (pe_nu == "3/2")
                v = dimer::li_half(dimer::HalfOrder::three_halves, z, side);
            else if (pe_nu == "1/2")
                v = dimer::li_half(dimer::HalfOrder::one_half, z, side);
            else if (pe_nu == "-1/2")
                v = dimer::li_half(dimer::HalfOrder::minus_half, z, side);
            else {
                const int nu = std::stoi(pe_nu);
                v = (nu == 1 && pe_im == 0.0 && pe_re >= 1.0) ? dimer::li_int(nu, pe_re, side)
                                                              : dimer::li_int(nu, z);
            }
            char buf[96];
            std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.real(), v.imag());
            *out.os << buf;
            return 0;
        }
        if (cmd_enum->parsed()) {
            dimer::dump_covers(ec_m, ec_n, *out.os);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
