// urv: benchmark front end for the URV factorizations.
//
//   urv gen    --matrix slow --seed 1 --out a.bin
//   urv bench  --matrix slow --alg powerurv --q 1 --seed 7 --out p.csv
//   urv lemma  --matrix slow --ell 60 --q 1 --seed 3
//   urv timing --sizes 256,512 --reps 3 --out t.csv
//   urv flops  --n 1000
//
// Exit codes: 0 success, 1 invalid arguments or input, 2 numerical failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <urv/io.hpp>
#include <urv/urv.hpp>

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct MatrixArgs
{
    std::string matrix = "slow";
    std::uint64_t seed = 0;
    std::optional<urv::Index> m;
    std::optional<urv::Index> n;
    bool literal_decay = false;
    double theta = urv::kahan_default_theta;
};

struct AlgArgs
{
    std::string alg = "powerurv";
    int q = 0;
    bool no_reorth = false;
    std::optional<urv::Index> ell;
};

struct LoadedMatrix
{
    urv::Matrix a;
    std::optional<std::vector<double>> true_sigma;
    json spec;
};

void add_matrix_options(CLI::App* cmd, MatrixArgs& args)
{
    cmd->add_option("--matrix", args.matrix, "fast|slow|sshape|bie|kahan|file:<path>");
    cmd->add_option("--seed", args.seed, "u64 seed; matrix stream 0, algorithm stream 1");
    cmd->add_option("--m", args.m, "row count override")->check(CLI::PositiveNumber);
    cmd->add_option("--n", args.n, "column count override")->check(CLI::PositiveNumber);
    cmd->add_flag("--literal-decay", args.literal_decay, "fast: use (1e-20)^(k-1) verbatim");
    cmd->add_option("--theta", args.theta, "kahan angle in radians");
}

LoadedMatrix load(const MatrixArgs& args)
{
    if (args.matrix.rfind("file:", 0) == 0) {
        const std::string path = args.matrix.substr(5);
        return {urv::load_matrix(path), std::nullopt, json{{"file", path}}};
    }
    urv::TestMatrixSpec spec = urv::TestMatrixSpec::defaults(urv::parse_matrix_kind(args.matrix), {args.seed, 0});
    const bool square = spec.kind == urv::MatrixKind::boundary_integral || spec.kind == urv::MatrixKind::kahan;
    if (square && (args.m || args.n)) {
        const urv::Index size = args.n ? *args.n : *args.m;
        urv::detail::require(!(args.m && args.n && *args.m != *args.n), args.matrix + " matrix is square");
        spec.m = spec.n = size;
    } else {
        spec.m = args.m.value_or(spec.m);
        spec.n = args.n.value_or(spec.n);
    }
    spec.literal_decay = args.literal_decay;
    spec.theta = args.theta;
    urv::GeneratedMatrix g = urv::generate(spec);
    return {std::move(g.a), std::move(g.true_sigma), json(spec)};
}

std::string manifest_path(const std::string& out)
{
    const auto slash = out.find_last_of('/');
    const auto dot = out.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
        return out.substr(0, dot) + ".json";
    }
    return out + ".json";
}

void write_manifest(const std::string& out, json manifest)
{
    manifest["version"] = std::string(urv::version);
    std::ofstream os(manifest_path(out));
    urv::detail::require(static_cast<bool>(os), "cannot open manifest for '" + out + "'");
    os << manifest.dump(2) << '\n';
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

json algorithm_json(const urv::Provenance& p)
{
    json j{{"name", p.algorithm}, {"q", p.q}, {"reorth", p.reorth}};
    if (p.ell) {
        j["ell"] = *p.ell;
    }
    return j;
}

int cmd_gen(const MatrixArgs& margs, const std::string& out)
{
    const auto t0 = Clock::now();
    LoadedMatrix lm = load(margs);
    urv::save_matrix(out, lm.a);
    write_manifest(out, {{"command", "gen"},
                         {"spec", lm.spec},
                         {"seed", urv::RngSeed{margs.seed, 0}},
                         {"wall_seconds", seconds_since(t0)},
                         {"outputs", json::array({out})}});
    std::cout << out << ": " << lm.a.rows() << " x " << lm.a.cols() << '\n';
    return 0;
}

urv::UrvFactorization run_urv(const std::string& alg, urv::ConstMatrixView a, const AlgArgs& args, urv::RngSeed seed)
{
    if (alg == "ddh") {
        return urv::ddh_urv(a, seed);
    }
    if (alg == "powerurv") {
        return urv::power_urv(a, args.q, !args.no_reorth, seed);
    }
    if (alg == "qlp") {
        return urv::qlp(a);
    }
    if (alg == "cpqr") {
        return urv::cpqr_urv(a);
    }
    throw urv::invalid_input("unknown algorithm '" + alg + "' (ddh|powerurv|qlp|rsvd|cpqr)");
}

int cmd_bench(const MatrixArgs& margs, const AlgArgs& aargs, const std::string& out)
{
    urv::detail::require(aargs.q >= 0, "--q must be nonnegative");
    const auto t0 = Clock::now();
    LoadedMatrix lm = load(margs);
    const urv::RngSeed alg_seed{margs.seed, 1};
    const std::vector<double> sigma = urv::singular_values(lm.a);

    std::ostringstream csv;
    urv::Provenance prov;
    if (aargs.alg == "rsvd") {
        urv::detail::require(aargs.ell.has_value(), "--alg rsvd needs --ell");
        urv::RsvdFactorization f = urv::rsvd(lm.a, *aargs.ell, aargs.q, alg_seed, !aargs.no_reorth);
        urv::write_profile_csv(csv, urv::error_profile(lm.a, f, sigma));
        prov = f.provenance;
    } else {
        urv::UrvFactorization f = run_urv(aargs.alg, lm.a, aargs, alg_seed);
        const urv::RevealProfile reveal = urv::reveal_profile(f, sigma);
        urv::write_profile_csv(csv, urv::error_profile(lm.a, f, sigma), &reveal);
        prov = f.provenance;
    }
    for (const auto& w : prov.warnings) {
        std::cerr << "warning: " << w << '\n';
    }

    if (out.empty()) {
        std::cout << csv.str();
        return 0;
    }
    {
        std::ofstream os(out);
        urv::detail::require(static_cast<bool>(os), "cannot open '" + out + "' for writing");
        os << csv.str();
    }
    json manifest{{"command", "bench"},
                  {"spec", lm.spec},
                  {"algorithm", algorithm_json(prov)},
                  {"seed", alg_seed},
                  {"wall_seconds", seconds_since(t0)},
                  {"outputs", json::array({out})},
                  {"warnings", prov.warnings}};
    write_manifest(out, std::move(manifest));
    return 0;
}

int cmd_lemma(const MatrixArgs& margs, const AlgArgs& aargs, const std::string& out)
{
    urv::detail::require(aargs.ell.has_value(), "lemma needs --ell");
    urv::detail::require(aargs.q >= 0, "--q must be nonnegative");
    const auto t0 = Clock::now();
    LoadedMatrix lm = load(margs);
    const urv::RngSeed alg_seed{margs.seed, 1};
    const urv::LemmaResult r = urv::lemma_check(lm.a, *aargs.ell, aargs.q, alg_seed, !aargs.no_reorth);

    std::cout << "discrepancy " << urv::format_double(r.discrepancy) << '\n'
              << "sample_rank " << r.sample_rank << " of " << *aargs.ell << '\n';
    if (r.rank_deficient) {
        std::cout << "note: sample matrix is rank deficient, the bound does not apply\n";
    }
    if (!out.empty()) {
        std::ofstream os(out);
        urv::detail::require(static_cast<bool>(os), "cannot open '" + out + "' for writing");
        os << json{{"command", "lemma"},
                   {"spec", lm.spec},
                   {"algorithm", {{"q", aargs.q}, {"reorth", !aargs.no_reorth}, {"ell", *aargs.ell}}},
                   {"seed", alg_seed},
                   {"discrepancy", r.discrepancy},
                   {"sample_rank", r.sample_rank},
                   {"rank_deficient", r.rank_deficient},
                   {"wall_seconds", seconds_since(t0)},
                   {"version", std::string(urv::version)}}
                  .dump(2)
           << '\n';
    }
    return 0;
}

double time_once(const std::string& alg, const urv::Matrix& a, int q, urv::RngSeed seed)
{
    const auto t0 = Clock::now();
    if (alg == "qr") {
        (void)urv::householder_qr(a);
    } else if (alg == "cpqr") {
        (void)urv::cpqr(a);
    } else if (alg == "ddh") {
        (void)urv::ddh_urv(a, seed);
    } else if (alg == "powerurv") {
        (void)urv::power_urv(a, q, true, seed);
    } else if (alg == "qlp") {
        (void)urv::qlp(a);
    } else {
        throw urv::invalid_input("unknown timing algorithm '" + alg + "' (qr|cpqr|ddh|powerurv|qlp)");
    }
    return seconds_since(t0);
}

int cmd_timing(const std::vector<urv::Index>& sizes, int reps, const std::vector<std::string>& algs, int q,
               std::uint64_t seed, const std::string& out)
{
    urv::detail::require(reps >= 1, "--reps must be positive");
    urv::detail::require(q >= 0, "--q must be nonnegative");
    std::ostringstream csv;
    csv << "alg,n,median_seconds,reps\n";
    for (urv::Index n : sizes) {
        const urv::Matrix a = urv::gaussian_matrix(n, n, {seed, 0});
        for (const auto& alg : algs) {
            std::vector<double> t;
            for (int r = 0; r < reps; ++r) {
                t.push_back(time_once(alg, a, q, {seed, 1}));
            }
            std::sort(t.begin(), t.end());
            const double med = t.size() % 2 ? t[t.size() / 2] : 0.5 * (t[t.size() / 2 - 1] + t[t.size() / 2]);
            csv << alg << ',' << n << ',' << urv::format_double(med) << ',' << reps << '\n';
        }
    }
    if (out.empty()) {
        std::cout << csv.str();
        return 0;
    }
    std::ofstream os(out);
    urv::detail::require(static_cast<bool>(os), "cannot open '" + out + "' for writing");
    os << csv.str();
    write_manifest(out, {{"command", "timing"},
                         {"sizes", sizes},
                         {"reps", reps},
                         {"algorithms", algs},
                         {"q", q},
                         {"seed", urv::RngSeed{seed, 0}},
                         {"outputs", json::array({out})}});
    return 0;
}

int cmd_flops(double m, double n, double q)
{
    std::printf("%-14s %14s %14s %14s %14s %10s\n", "algorithm", "gemm/qr", "cpqr", "other", "total", "total/n^3");
    for (auto alg : {urv::FlopAlgorithm::golub_reinsch, urv::FlopAlgorithm::qlp, urv::FlopAlgorithm::rand_utv,
                     urv::FlopAlgorithm::power_urv}) {
        const urv::FlopModel f = urv::flop_estimate(alg, m, n, q);
        std::printf("%-14s %14.6g %14.6g %14.6g %14.6g %10.4f\n", std::string(urv::to_string(alg)).c_str(), f.gemm_qr,
                    f.cpqr, f.other, f.total(), f.total() / (n * n * n));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Randomized URV factorizations: generators, error profiles, lemma check, timing"};
    app.set_version_flag("--version", std::string(urv::version));
    app.require_subcommand(1);

    MatrixArgs margs;
    AlgArgs aargs;
    std::string out;

    auto* gen = app.add_subcommand("gen", "write a test matrix (.csv text, anything else binary)");
    add_matrix_options(gen, margs);
    gen->add_option("--out", out, "output path")->required();

    auto* bench = app.add_subcommand("bench", "factorize and write the per-k error profile CSV");
    add_matrix_options(bench, margs);
    bench->add_option("--alg", aargs.alg, "ddh|powerurv|qlp|rsvd|cpqr");
    bench->add_option("--q", aargs.q, "power iterations");
    bench->add_flag("--no-reorth", aargs.no_reorth, "skip re-orthonormalization in the power iteration");
    bench->add_option("--ell", aargs.ell, "rsvd sample size")->check(CLI::PositiveNumber);
    bench->add_option("--out", out, "CSV path (manifest written next to it); stdout when omitted");

    auto* lemma = app.add_subcommand("lemma", "compare PowerURV and RSVD projections from one Gaussian draw");
    add_matrix_options(lemma, margs);
    lemma->add_option("--ell", aargs.ell, "sample size")->required()->check(CLI::PositiveNumber);
    lemma->add_option("--q", aargs.q, "power iterations");
    lemma->add_flag("--no-reorth", aargs.no_reorth, "skip re-orthonormalization in the power iteration");
    lemma->add_option("--out", out, "optional JSON result path");

    std::vector<urv::Index> sizes{256, 512};
    int reps = 3;
    std::vector<std::string> algs{"qr", "cpqr"};
    auto* timing = app.add_subcommand("timing", "median wall time per (algorithm, n) on square Gaussian input");
    timing->add_option("--sizes", sizes, "comma separated sizes")->delimiter(',')->check(CLI::PositiveNumber);
    timing->add_option("--reps", reps, "repetitions per cell");
    timing->add_option("--algs", algs, "qr|cpqr|ddh|powerurv|qlp, comma separated")->delimiter(',');
    timing->add_option("--q", aargs.q, "power iterations for powerurv");
    timing->add_option("--seed", margs.seed, "u64 seed");
    timing->add_option("--out", out, "CSV path; stdout when omitted");

    double fm = 0;
    double fn = 1000;
    double fq = 1;
    auto* flops = app.add_subcommand("flops", "leading-order flop counts");
    flops->add_option("--m", fm, "rows (default n)");
    flops->add_option("--n", fn, "columns");
    flops->add_option("--q", fq, "power iterations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*gen) {
            return cmd_gen(margs, out);
        }
        if (*bench) {
            return cmd_bench(margs, aargs, out);
        }
        if (*lemma) {
            return cmd_lemma(margs, aargs, out);
        }
        if (*timing) {
            return cmd_timing(sizes, reps, algs, aargs.q, margs.seed, out);
        }
        if (*flops) {
            return cmd_flops(fm > 0 ? fm : fn, fn, fq);
        }
    } catch (const urv::numerical_failure& e) {
        std::cerr << "urv: numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "urv: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "urv: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
