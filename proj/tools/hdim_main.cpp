/**
 * hdim_main.cpp
 *
 * Command-line front end.  Subcommands are thin wrappers over the library:
 *
 *   hdim bounds --config cfg.json [--out dir] [--mode analytic|numeric]
 *   hdim fig1   [--out dir]
 *   hdim fig2   [--out dir] [--k 262]
 *   hdim formula  {jordan|diagonalizable|hat|counterexample|example1|oned} ...
 *   hdim lattice  {minima|hprofile} ...
 *   hdim empirical {boxcount|fiber|covering|preimages|liouville} ...
 *
 * All output is deterministic: identical flags and config bytes produce
 * identical stdout and identical files.  Errors go to stderr with a nonzero
 * exit code.
 */
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hdim/config.hpp"
#include "hdim/empirical.hpp"
#include "hdim/errors.hpp"
#include "hdim/formulas.hpp"
#include "hdim/lattice.hpp"

namespace {

using hdim::BigInt;
using hdim::Mat;
using hdim::Rat;
using hdim::Vec;
using Json = nlohmann::ordered_json;

// ── small parsers ────────────────────────────────────────────────────────

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

Rat rat_arg(const std::string& text, const char* what) {
    try {
        return hdim::parse_rational(text);
    } catch (const hdim::Error&) {
        hdim::fail(hdim::ErrorCode::InvalidConfig,
                   std::string(what) + ": expected a rational, got '" + text + "'");
    }
}

/// Rows separated by ';', entries by ',':  "2,1;1,1".
Mat<Rat> mat_arg(const std::string& text, const char* what) {
    const auto rows = split(text, ';');
    const auto first = split(rows[0], ',');
    Mat<Rat> m(static_cast<int>(rows.size()), static_cast<int>(first.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto entries = split(rows[i], ',');
        if (entries.size() != first.size())
            hdim::fail(hdim::ErrorCode::InvalidConfig,
                       std::string(what) + ": ragged rows in '" + text + "'");
        for (std::size_t j = 0; j < entries.size(); ++j)
            m(static_cast<int>(i), static_cast<int>(j)) = rat_arg(entries[j], what);
    }
    return m;
}

std::vector<double> moduli_arg(const std::string& text) {
    std::vector<double> out;
    for (const auto& part : split(text, ','))
        out.push_back(hdim::to_double(rat_arg(part, "--moduli")));
    return out;
}

std::vector<hdim::JordanBlockSpec> blocks_arg(const std::string& text) {
    std::vector<hdim::JordanBlockSpec> blocks;
    for (const auto& part : split(text, ',')) {
        const auto pieces = split(part, ':');
        if (pieces.size() != 2)
            hdim::fail(hdim::ErrorCode::InvalidConfig,
                       "--blocks: expected modulus:size pairs, got '" + part + "'");
        hdim::JordanBlockSpec b;
        b.lambda = rat_arg(pieces[0], "--blocks");
        b.size = std::stoi(pieces[1]);
        blocks.push_back(std::move(b));
    }
    return blocks;
}

// ── worked families ──────────────────────────────────────────────────────

Mat<Rat> fig1_base() {
    Mat<Rat> a(2, 2);
    a(0, 0) = 2;
    a(0, 1) = 1;
    a(1, 0) = 1;
    a(1, 1) = 1;
    return a;
}

hdim::MatrixFamily fig1_family() { return hdim::MatrixFamily::scaled_power(5, fig1_base()); }

/// A_n = diag(k^n) ⊕ (5A)^n with A = [[2,1],[1,1]]: the 3-D diagonal-plus-
/// block family whose lattice minima are exactly (k^-n, 5^-n, 5^-n).
Mat<Rat> example1_matrix(long k, long n) {
    const Mat<Rat> b = fig1_base();
    Mat<Rat> block = Mat<Rat>::identity(2);
    for (long i = 0; i < n; ++i) block = block * b;
    Mat<Rat> m(3, 3);
    m(0, 0) = hdim::rat_pow(Rat(k), n);
    const Rat scale = hdim::rat_pow(Rat(5), n);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m(i + 1, j + 1) = scale * block(i, j);
    return m;
}

Mat<Rat> stage_matrix_arg(const std::string& spec, long k, long n, const char* what) {
    if (spec == "example1") return example1_matrix(k, n);
    Mat<Rat> base = spec == "fig1" ? Mat<Rat>(fig1_base()) : mat_arg(spec, what);
    if (spec == "fig1")
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) base(i, j) = base(i, j) * 5;
    if (base.rows() != base.cols())
        hdim::fail(hdim::ErrorCode::InvalidConfig, std::string(what) + ": matrix must be square");
    Mat<Rat> m = Mat<Rat>::identity(base.rows());
    for (long i = 0; i < n; ++i) m = m * base;
    return m;
}

// ── output helpers ───────────────────────────────────────────────────────

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) hdim::fail(hdim::ErrorCode::InvalidConfig, "cannot write " + path.string());
    out << bytes;
}

std::string rat_or_sig9(const Rat& square) {
    // Exact square root when both numerator and denominator are perfect squares.
    const BigInt num = hdim::numer(square), den = hdim::denom(square);
    const BigInt rn = hdim::isqrt_floor(num), rd = hdim::isqrt_floor(den);
    if (rn * rn == num && rd * rd == den) return hdim::format_rational(Rat(rn, rd));
    return hdim::format_sig9(std::sqrt(hdim::to_double(square)));
}

void emit(const Json& j) { std::cout << j.dump() << "\n"; }

// ── subcommand bodies ────────────────────────────────────────────────────

int run_bounds(const std::string& config_path, const std::string& out_override,
               const std::string& mode_override, std::uint64_t seed, bool seed_set,
               long long budget, bool budget_set) {
    hdim::RunConfig cfg = hdim::load_config(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (mode_override == "analytic") cfg.mode = hdim::BoundsMode::Analytic;
    if (mode_override == "numeric") cfg.mode = hdim::BoundsMode::Numeric;
    if (seed_set) cfg.seed = seed;
    if (budget_set) cfg.budget = budget;

    const hdim::BoundsReport rep =
        hdim::dimension_bounds(cfg.family, cfg.psi, cfg.n_lo, cfg.n_hi, cfg.mode);

    std::filesystem::create_directories(cfg.out_dir);
    const std::filesystem::path dir(cfg.out_dir);
    write_file(dir / "bounds.csv", hdim::bounds_csv(rep));
    write_file(dir / "bounds.json", hdim::bounds_json(rep));

    if (!cfg.tau_grid.empty()) {
        std::ostringstream sweep;
        sweep << "tau,s_lower,s_upper,s_hat,regime\n";
        for (const Rat& tau : cfg.tau_grid) {
            const hdim::PsiSpec psi = hdim::PsiSpec::exponential(tau);
            const hdim::BoundsReport r =
                hdim::dimension_bounds(cfg.family, psi, cfg.n_lo, cfg.n_hi, cfg.mode);
            sweep << hdim::format_sig9(hdim::to_double(tau)) << ','
                  << hdim::format_sig9(r.s_lower) << ',' << hdim::format_sig9(r.s_upper) << ','
                  << hdim::format_sig9(r.s_hat) << ',' << r.regime << '\n';
        }
        write_file(dir / "sweep.csv", sweep.str());
    }

    std::cout << "s_lower=" << hdim::format_sig9(rep.s_lower)
              << " s_upper=" << hdim::format_sig9(rep.s_upper)
              << " s_hat=" << hdim::format_sig9(rep.s_hat) << " regime=" << rep.regime << "\n";
    return 0;
}

int run_fig1(const std::string& out_dir) {
    const hdim::MatrixFamily fam = fig1_family();
    const Mat<Rat> base = fig1_base();
    std::ostringstream csv;
    csv << "tau,s_upper_formula,s_lower_formula\n";
    for (int i = 1; i <= 30; ++i) {
        const Rat tau(i, 10);
        const double t = hdim::to_double(tau);
        const double upper = hdim::formula_counterexample(BigInt(5), base, t);
        const hdim::BoundsReport rep = hdim::dimension_bounds(
            fam, hdim::PsiSpec::exponential(tau), 1, 1, hdim::BoundsMode::Analytic);
        csv << hdim::format_sig9(t) << ',' << hdim::format_sig9(upper) << ','
            << hdim::format_sig9(rep.s_lower) << '\n';
    }
    const std::string bytes = csv.str();
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_file(std::filesystem::path(out_dir) / "fig1.csv", bytes);
    }
    std::cout << bytes;
    return 0;
}

int run_fig2(const std::string& out_dir, long k) {
    const double sqrt5 = std::sqrt(5.0);
    const double l1 = std::log(5.0 * (3.0 - sqrt5) / 2.0);
    const double l2 = std::log(5.0 * (3.0 + sqrt5) / 2.0);
    const double l3 = std::log(static_cast<double>(k));
    std::ostringstream csv;
    csv << "tau,s_hat,s_upper,s_lower\n";
    for (int i = 1; i <= 12; ++i) {
        const double tau = i / 10.0;
        const double hat = 3.0 * l3 / (tau + l3);
        const double upper = (tau + 3.0 * l2) / (tau + l2);
        const double lower = (2.0 * tau + 3.0 * l1) / (tau + l1);
        if (!(lower < upper && upper < hat))
            hdim::fail(hdim::ErrorCode::NumericalFailure,
                       "bound ordering violated at tau=" + hdim::format_sig9(tau));
        csv << hdim::format_sig9(tau) << ',' << hdim::format_sig9(hat) << ','
            << hdim::format_sig9(upper) << ',' << hdim::format_sig9(lower) << '\n';
    }
    const std::string bytes = csv.str();
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_file(std::filesystem::path(out_dir) / "fig2.csv", bytes);
    }
    std::cout << bytes;
    return 0;
}

int run_lattice_minima(const std::string& matrix, long k, long n, long long budget) {
    hdim::LatticeData lat = hdim::lattice_from_matrix(stage_matrix_arg(matrix, k, n, "--matrix"));
    hdim::successive_minima(lat, budget);
    Json arr = Json::array();
    for (const Rat& msq : lat.minima_sq) arr.push_back(rat_or_sig9(msq));
    emit(arr);
    return 0;
}

int run_lattice_hprofile(const std::string& matrix, long k, long n) {
    hdim::MatrixFamily fam;
    if (matrix == "fig1") {
        fam = fig1_family();
    } else if (matrix == "example1") {
        std::vector<Mat<Rat>> stages;
        for (long i = 1; i <= n; ++i) stages.push_back(example1_matrix(k, i));
        fam = hdim::MatrixFamily::explicit_list(std::move(stages));
    } else {
        fam = hdim::MatrixFamily::power(mat_arg(matrix, "--matrix"));
    }
    const hdim::HProfile prof = hdim::h_profile(fam, n);
    Json j = Json::object();
    j["n"] = n;
    Json arr = Json::array();
    for (double h : prof.h) arr.push_back(hdim::format_sig9(h));
    j["h"] = std::move(arr);
    emit(j);
    return 0;
}

int run_boxcount(const std::string& preset, long long budget) {
    hdim::MatrixFamily fam;
    hdim::PsiSpec psi;
    Vec<Rat> y;
    long n_lo = 1, n_hi = 0;
    int p_lo = 0, p_hi = 0;
    if (preset == "cor18") {
        Mat<Rat> two(1, 1);
        two(0, 0) = 2;
        fam = hdim::MatrixFamily::power(two);
        psi = hdim::PsiSpec::geometric(Rat(1), Rat(2));
        y = {Rat(0)};
        n_hi = 9, p_lo = 6, p_hi = 18;
    } else if (preset == "constpsi") {
        Mat<Rat> two(1, 1);
        two(0, 0) = 2;
        fam = hdim::MatrixFamily::power(two);
        psi = hdim::PsiSpec::geometric(Rat(1, 4), Rat(1));
        y = {Rat(0)};
        n_hi = 14, p_lo = 3, p_hi = 14;
    } else if (preset == "counterexample") {
        fam = fig1_family();
        psi = hdim::PsiSpec::exponential(Rat(1, 2));
        y = {Rat(0), Rat(0)};
        n_hi = 4, p_lo = 4, p_hi = 13;
    } else {
        hdim::fail(hdim::ErrorCode::InvalidConfig,
                   "--preset: expected cor18, constpsi, or counterexample");
    }
    const hdim::BoxCountEstimate est =
        hdim::box_count_dimension(fam, psi, y, n_lo, n_hi, p_lo, p_hi, budget);
    Json j = Json::object();
    j["preset"] = preset;
    j["slope"] = hdim::format_sig9(est.slope);
    j["residual"] = hdim::format_sig9(est.residual);
    j["depths"] = est.depths;
    j["matched_n"] = est.matched_n;
    j["counts"] = est.counts;
    emit(j);
    return 0;
}

int run_fiber(long n, const std::string& tau, const std::string& x, long long budget) {
    const hdim::FiberStructure fib =
        hdim::fiber_intervals(BigInt(5), fig1_base(), rat_arg(x, "--x"), n,
                              hdim::PsiSpec::exponential(rat_arg(tau, "--tau")), budget);
    Json j = Json::object();
    j["n"] = n;
    j["count"] = fib.count;
    j["materialized"] = fib.materialized;
    j["min_gap"] = hdim::format_sig9(fib.min_gap);
    j["min_len"] = hdim::format_sig9(fib.min_len);
    j["max_len"] = hdim::format_sig9(fib.max_len);
    j["sin_alpha"] = hdim::format_sig9(fib.sin_alpha);
    emit(j);
    return 0;
}

int run_covering(const std::string& preset, const std::string& rates, const std::string& tau,
                 long n, int kk, long long budget) {
    hdim::MatrixFamily fam;
    if (preset == "fig1") {
        fam = fig1_family();
    } else if (preset == "diaglog") {
        std::vector<Vec<Rat>> rows;
        const auto rate_parts = split(rates, ',');
        for (long i = 1; i <= n; ++i) {
            Vec<Rat> row;
            for (const auto& rp : rate_parts) row.push_back(rat_arg(rp, "--rates") * i);
            rows.push_back(std::move(row));
        }
        fam = hdim::MatrixFamily::diagonal(std::move(rows), true);
    } else {
        hdim::fail(hdim::ErrorCode::InvalidConfig, "--preset: expected fig1 or diaglog");
    }
    const hdim::CoveringCount cov =
        hdim::covering_count(fam, hdim::PsiSpec::exponential(rat_arg(tau, "--tau")), n, kk, budget);
    Json j = Json::object();
    j["n"] = n;
    j["k"] = kk;
    j["formula"] = hdim::format_sig9(cov.formula);
    j["constructive"] = hdim::format_sig9(cov.constructive);
    j["ratio"] = hdim::format_sig9(cov.ratio);
    j["deduplicated"] = cov.deduplicated;
    emit(j);
    return 0;
}

int run_preimages(const std::string& matrix, long k, long n, const std::string& y_arg,
                  long long budget) {
    hdim::MatrixFamily fam;
    if (matrix == "fig1") {
        fam = fig1_family();
    } else if (matrix == "example1") {
        std::vector<Mat<Rat>> stages;
        for (long i = 1; i <= n; ++i) stages.push_back(example1_matrix(k, i));
        fam = hdim::MatrixFamily::explicit_list(std::move(stages));
    } else {
        fam = hdim::MatrixFamily::power(mat_arg(matrix, "--matrix"));
    }
    Vec<Rat> y(static_cast<std::size_t>(fam.d), Rat(0));
    if (!y_arg.empty()) {
        const auto parts = split(y_arg, ',');
        if (static_cast<int>(parts.size()) != fam.d)
            hdim::fail(hdim::ErrorCode::InvalidConfig, "--y: expected " + std::to_string(fam.d) +
                                                           " coordinates");
        for (std::size_t i = 0; i < parts.size(); ++i) y[i] = rat_arg(parts[i], "--y");
    }
    const hdim::PreimageSet pre = hdim::enumerate_preimages(fam, n, y, budget);
    Json j = Json::object();
    j["n"] = n;
    j["count"] = pre.count.str();
    if (pre.exact_count) j["det"] = pre.exact_count->str();
    j["materialized"] = pre.materialized;
    emit(j);
    return 0;
}

int run_liouville(const std::string& beta, const std::string& m_text, long zx, long zy) {
    hdim::QuadSlope slope;
    if (beta == "golden") {
        slope = hdim::QuadSlope{1, 1, 2, 5};
    } else {
        const auto parts = split(beta, ',');
        if (parts.size() != 4)
            hdim::fail(hdim::ErrorCode::InvalidConfig, "--beta: expected p,q,r,D or 'golden'");
        slope.p = BigInt(parts[0]);
        slope.q = BigInt(parts[1]);
        slope.r = BigInt(parts[2]);
        slope.d = BigInt(parts[3]);
    }
    const bool ok = hdim::liouville_gap_check(slope, std::stol(m_text), zx, zy);
    Json j = Json::object();
    j["verified"] = ok;
    emit(j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hausdorff dimension bounds for shrinking-target sets"};
    app.require_subcommand(1);

    // bounds
    std::string config_path, out_dir, mode;
    std::uint64_t seed = 0;
    long long budget = 10'000'000;
    auto* bounds = app.add_subcommand("bounds", "per-n and aggregate dimension bounds");
    bounds->add_option("--config", config_path, "schema-1 JSON config")->required();
    bounds->add_option("--out", out_dir, "output directory (overrides config)");
    bounds->add_option("--mode", mode, "analytic|numeric (overrides config)")
        ->check(CLI::IsMember({"analytic", "numeric"}));
    auto* seed_opt = bounds->add_option("--seed", seed, "rng seed (overrides config)");
    auto* budget_opt = bounds->add_option("--budget", budget, "work budget (overrides config)");

    // fig1 / fig2
    std::string fig_out;
    auto* fig1 = app.add_subcommand("fig1", "upper/lower bound sweep for the 2-D worked family");
    fig1->add_option("--out", fig_out, "also write fig1.csv here");
    long fig2_k = 262;
    auto* fig2 = app.add_subcommand("fig2", "three-bound sweep for the 3-D worked family");
    fig2->add_option("--out", fig_out, "also write fig2.csv here");
    fig2->add_option("--k", fig2_k, "first diagonal growth factor");

    // formula
    auto* formula = app.add_subcommand("formula", "closed-form dimension values");
    formula->require_subcommand(1);
    std::string blocks_text, moduli_text, a_text = "2,1;1,1", tau_text = "1", lambda_text = "5";
    long f_k = 262, horizon = 500;
    std::string coeff_text = "1", base_text = "2";
    auto* f_jordan = formula->add_subcommand("jordan", "Jordan-block family");
    f_jordan->add_option("--blocks", blocks_text, "modulus:size pairs, comma separated")
        ->required();
    f_jordan->add_option("--tau", tau_text, "decay rate");
    auto* f_diag = formula->add_subcommand("diagonalizable", "real diagonalizable family");
    f_diag->add_option("--moduli", moduli_text, "eigenvalue moduli, comma separated")->required();
    f_diag->add_option("--tau", tau_text, "decay rate");
    auto* f_hat = formula->add_subcommand("hat", "upper spectrum value");
    f_hat->add_option("--moduli", moduli_text, "eigenvalue moduli, comma separated")->required();
    f_hat->add_option("--tau", tau_text, "decay rate");
    auto* f_counter = formula->add_subcommand("counterexample", "scaled integer 2x2 family");
    f_counter->add_option("--lambda", lambda_text, "integer scale");
    f_counter->add_option("--a", a_text, "2x2 integer matrix, rows ; separated");
    f_counter->add_option("--tau", tau_text, "decay rate");
    auto* f_ex1 = formula->add_subcommand("example1", "3-D worked family value");
    f_ex1->add_option("--k", f_k, "first diagonal growth factor");
    f_ex1->add_option("--tau", tau_text, "decay rate");
    auto* f_oned = formula->add_subcommand("oned", "1-D sequence value");
    f_oned->add_option("--coeff", coeff_text, "sequence coefficient");
    f_oned->add_option("--base", base_text, "geometric growth base");
    f_oned->add_option("--tau", tau_text, "psi decay rate");
    f_oned->add_option("--horizon", horizon, "tail-window horizon");

    // lattice
    auto* lattice = app.add_subcommand("lattice", "exact lattice computations");
    lattice->require_subcommand(1);
    std::string lat_matrix = "fig1";
    long lat_k = 262, lat_n = 1;
    long long lat_budget = 4'000'000;
    auto* l_minima = lattice->add_subcommand("minima", "successive minima of A_n^{-1} Z^d");
    l_minima->add_option("--matrix", lat_matrix, "fig1 | example1 | rows like 2,1;1,1");
    l_minima->add_option("--k", lat_k, "example1 growth factor");
    l_minima->add_option("--n", lat_n, "stage")->required();
    l_minima->add_option("--budget", lat_budget, "enumeration node budget");
    auto* l_hprof = lattice->add_subcommand("hprofile", "normalized minima exponents");
    l_hprof->add_option("--matrix", lat_matrix, "fig1 | example1 | rows like 2,1;1,1");
    l_hprof->add_option("--k", lat_k, "example1 growth factor");
    l_hprof->add_option("--n", lat_n, "stage")->required();

    // empirical
    auto* empirical = app.add_subcommand("empirical", "desk-scale constructions");
    empirical->require_subcommand(1);
    std::string preset = "cor18", emp_tau = "1/2", emp_x = "2/7", rates = "1,2", y_arg;
    std::string emp_matrix = "fig1", beta = "golden", m_text = "100";
    long emp_n = 5, emp_k_arg = 262, zx = 0, zy = 0;
    int cov_k = 1;
    long long emp_budget = 10'000'000;
    auto* e_box = empirical->add_subcommand("boxcount", "matched-depth box-count slope");
    e_box->add_option("--preset", preset, "cor18 | constpsi | counterexample")->required();
    e_box->add_option("--budget", emp_budget, "total grid-cell budget")
        ->default_val(100'000'000LL);
    auto* e_fiber = empirical->add_subcommand("fiber", "fiber interval structure");
    e_fiber->add_option("--n", emp_n, "stage")->required();
    e_fiber->add_option("--tau", emp_tau, "psi decay rate");
    e_fiber->add_option("--x", emp_x, "fiber abscissa");
    e_fiber->add_option("--budget", emp_budget, "materialization budget");
    auto* e_cov = empirical->add_subcommand("covering", "formula vs constructive covers");
    e_cov->add_option("--preset", preset, "fig1 | diaglog");
    e_cov->add_option("--rates", rates, "diaglog growth rates, comma separated");
    e_cov->add_option("--tau", emp_tau, "psi decay rate");
    e_cov->add_option("--n", emp_n, "stage")->required();
    e_cov->add_option("--k", cov_k, "pivot index")->required();
    e_cov->add_option("--budget", emp_budget, "cell budget");
    auto* e_pre = empirical->add_subcommand("preimages", "preimage fibers F_n(y)");
    e_pre->add_option("--matrix", emp_matrix, "fig1 | example1 | rows like 2,1;1,1");
    e_pre->add_option("--k", emp_k_arg, "example1 growth factor");
    e_pre->add_option("--n", emp_n, "stage")->required();
    e_pre->add_option("--y", y_arg, "target point, comma separated");
    e_pre->add_option("--budget", emp_budget, "materialization budget");
    auto* e_liou = empirical->add_subcommand("liouville", "quadratic-slope gap certificate");
    e_liou->add_option("--beta", beta, "golden | p,q,r,D for (p+q*sqrt(D))/r");
    e_liou->add_option("--m", m_text, "denominator bound M");
    e_liou->add_option("--zx", zx, "integer x translate");
    e_liou->add_option("--zy", zy, "integer y translate");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bounds->parsed())
            return run_bounds(config_path, out_dir, mode, seed, !seed_opt->empty(), budget,
                              !budget_opt->empty());
        if (fig1->parsed()) return run_fig1(fig_out);
        if (fig2->parsed()) return run_fig2(fig_out, fig2_k);
        if (formula->parsed()) {
            const double tau = hdim::to_double(rat_arg(tau_text, "--tau"));
            double value = 0.0;
            if (f_jordan->parsed()) {
                value = hdim::formula_jordan(blocks_arg(blocks_text), tau);
            } else if (f_diag->parsed()) {
                value = hdim::formula_diagonalizable(moduli_arg(moduli_text), tau);
            } else if (f_hat->parsed()) {
                value = hdim::formula_hat(moduli_arg(moduli_text), tau);
            } else if (f_counter->parsed()) {
                const Rat lam = rat_arg(lambda_text, "--lambda");
                value = hdim::formula_counterexample(hdim::numer(lam), mat_arg(a_text, "--a"), tau);
            } else if (f_ex1->parsed()) {
                value = hdim::formula_example1(f_k, tau);
            } else if (f_oned->parsed()) {
                const auto seq = hdim::SeqSpec::geometric(rat_arg(coeff_text, "--coeff"),
                                                          rat_arg(base_text, "--base"));
                value = hdim::formula_1d(seq, hdim::PsiSpec::exponential(rat_arg(tau_text, "--tau")),
                                         horizon)
                            .value;
            }
            std::cout << hdim::format_sig9(value) << "\n";
            return 0;
        }
        if (l_minima->parsed()) return run_lattice_minima(lat_matrix, lat_k, lat_n, lat_budget);
        if (l_hprof->parsed()) return run_lattice_hprofile(lat_matrix, lat_k, lat_n);
        if (e_box->parsed()) return run_boxcount(preset, emp_budget);
        if (e_fiber->parsed()) return run_fiber(emp_n, emp_tau, emp_x, emp_budget);
        if (e_cov->parsed()) return run_covering(preset, rates, emp_tau, emp_n, cov_k, emp_budget);
        if (e_pre->parsed()) return run_preimages(emp_matrix, emp_k_arg, emp_n, y_arg, emp_budget);
        if (e_liou->parsed()) return run_liouville(beta, m_text, zx, zy);
    } catch (const hdim::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
