// command-line front end: tabulates the exact and asymptotic ensemble
// quantities as CSV or a JSON summary. Exit codes: 0 success, 1 module
// error (message verbatim on stderr), 2 usage error.
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <spinens/charfun.hpp>
#include <spinens/feee.hpp>
#include <spinens/log_space.hpp>
#include <spinens/rdm.hpp>
#include <spinens/rpse.hpp>
#include <spinens/sampling.hpp>
#include <spinens/spectrum.hpp>

namespace {

using nlohmann::ordered_json;
using namespace spinens;

constexpr double nan_cell = std::numeric_limits<double>::quiet_NaN();

// malformed invocations that CLI11 cannot catch (grid strings, cross-option
// requirements); reported like parse errors with exit code 2
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    int steps = 0;  // interval count; the grid has steps + 1 points
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    char tail = '\0';
    const int got =
        std::sscanf(text.c_str(), "%lf:%lf:%d%c", &g.start, &g.stop, &g.steps, &tail);
    if (got != 3) throw UsageError("grid '" + text + "' is not of the form start:stop:steps");
    if (g.steps < 1) throw UsageError("grid '" + text + "' needs at least one step");
    if (!std::isfinite(g.start) || !std::isfinite(g.stop))
        throw UsageError("grid '" + text + "' has a non-finite endpoint");
    return g;
}

// singular endpoints (u = -1, |q_max| = 1) are inset by 1e-9 so scans can
// start at the band edge without tripping the modules' domain guards
std::vector<double> make_grid(const GridSpec& g, double lo_singular, double hi_singular) {
    std::vector<double> pts(static_cast<std::size_t>(g.steps) + 1);
    for (int j = 0; j <= g.steps; ++j)
        pts[static_cast<std::size_t>(j)] = g.start + (g.stop - g.start) * j / g.steps;
    pts.front() = g.start;
    pts.back() = g.stop;
    for (double* end : {&pts.front(), &pts.back()}) {
        if (*end == lo_singular) {
            std::fprintf(stderr, "warning: grid endpoint %g inset to %g + 1e-9\n", *end, *end);
            *end += 1e-9;
        } else if (*end == hi_singular) {
            std::fprintf(stderr, "warning: grid endpoint %g inset to %g - 1e-9\n", *end, *end);
            *end -= 1e-9;
        }
    }
    return pts;
}

enum class ColumnKind { Sig, Int };

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::Sig;
};

struct Table {
    std::vector<Column> cols;
    std::vector<std::vector<double>> rows;
};

// points at which an ensemble is undefined (invalid factorized distribution,
// fewer than two active states) become empty cells, not command failures
template <class F>
double cell(F&& f) {
    try {
        return f();
    } catch (const std::domain_error&) {
        return nan_cell;
    }
}

std::string format_value(double v, ColumnKind kind, int precision) {
    if (std::isnan(v)) return "nan";
    char buf[48];
    if (kind == ColumnKind::Int)
        std::snprintf(buf, sizeof buf, "%.0f", v);
    else
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

struct Options {
    int n = 0;
    std::string grid;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    int threads = 0;  // 0 = hardware concurrency
    int precision = 10;

    std::string ensemble;
    std::string mode = "simplex";
    bool renormalize = false;
    int emax = std::numeric_limits<int>::min();  // sentinel: full spectrum
    double u = nan_cell;
    int fig_id = 0;
};

// thread count and output path are execution details, not part of the result,
// and keeping them out makes reruns bit-identical across --threads values
ordered_json config_echo(const Options& opt, const std::string& command) {
    ordered_json cfg;
    cfg["n"] = opt.n;
    cfg["grid"] = opt.grid;
    cfg["samples"] = opt.samples;
    cfg["seed"] = opt.seed;
    cfg["format"] = opt.format;
    cfg["precision"] = opt.precision;
    if (command == "sample") {
        cfg["ensemble"] = opt.ensemble;
        cfg["mode"] = opt.mode;
        cfg["renormalize"] = opt.renormalize;
        if (opt.emax != std::numeric_limits<int>::min()) cfg["emax"] = opt.emax;
        if (!std::isnan(opt.u)) cfg["u"] = opt.u;
    }
    if (command == "fig") cfg["id"] = opt.fig_id;
    return cfg;
}

class OutputSink {
  public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);  // binary keeps LF endings everywhere
            if (!file_) throw std::runtime_error("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

void write_table(const Table& t, const Options& opt, const std::string& command) {
    OutputSink sink(opt.out);
    std::ostream& os = sink.stream();
    if (opt.format == "csv") {
        for (std::size_t c = 0; c < t.cols.size(); ++c)
            os << (c ? "," : "") << t.cols[c].name;
        os << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                os << (c ? "," : "") << format_value(row[c], t.cols[c].kind, opt.precision);
            os << '\n';
        }
    } else {
        ordered_json j;
        j["command"] = command;
        j["config"] = config_echo(opt, command);
        ordered_json names = ordered_json::array();
        for (const auto& c : t.cols) names.push_back(c.name);
        j["columns"] = names;
        j["rows"] = t.rows.size();
        ordered_json ranges;
        for (std::size_t c = 0; c < t.cols.size(); ++c) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (const auto& row : t.rows)
                if (std::isfinite(row[c])) {
                    lo = std::min(lo, row[c]);
                    hi = std::max(hi, row[c]);
                }
            if (lo <= hi)
                ranges[t.cols[c].name] = {lo, hi};
            else
                ranges[t.cols[c].name] = nullptr;
        }
        j["range"] = ranges;
        os << j.dump(2) << '\n';
    }
    os.flush();
}

// rows are computed in parallel over grid points and emitted in grid order
template <class RowFn>
Table fill_table(std::vector<Column> cols, const std::vector<double>& points, int threads,
                 RowFn&& row_fn) {
    Table t;
    t.cols = std::move(cols);
    t.rows.assign(points.size(), {});
    detail::run_indexed(points.size(), threads,
                        [&](std::uint64_t j) { t.rows[j] = row_fn(points[j]); });
    return t;
}

GridSpec grid_or(const Options& opt, const char* fallback) {
    return parse_grid(opt.grid.empty() ? fallback : opt.grid);
}

std::vector<int> size_list(const Options& opt, std::initializer_list<int> fallback) {
    if (opt.n > 0) return {opt.n};
    return fallback;
}

Table cmd_spectrum(const Options& opt) {
    const Spectrum sp = full_spectrum(opt.n);
    const ColumnKind deg_kind =
        opt.n <= exact_degeneracy_max_n ? ColumnKind::Int : ColumnKind::Sig;
    Table t;
    t.cols = {{"i", ColumnKind::Int},
              {"degeneracy", deg_kind},
              {"log_degeneracy", ColumnKind::Sig},
              {"gaussian_dos", ColumnKind::Sig}};
    for (const Level& lv : sp.levels)
        t.rows.push_back({static_cast<double>(lv.i), lv.degeneracy_as_double(),
                          lv.log_degeneracy, gaussian_dos(sp.spec, lv.i)});
    return t;
}

Table cmd_feee_entropy(const Options& opt) {
    const int n = opt.n;
    const auto points = make_grid(grid_or(opt, "-1:0:100"), -1.0, 2.0);
    return fill_table({{"u"},
                       {"mean"},
                       {"std_dev"},
                       {"mean_exact"},
                       {"asym_mean"},
                       {"asym_std"}},
                      points, opt.threads, [n](double u) -> std::vector<double> {
                          const FeeeSpec spec{n, u * n};
                          const double mean =
                              cell([&] { return feee_entropy_stats(spec).mean; });
                          const double sd =
                              cell([&] { return feee_entropy_stats(spec).std_dev; });
                          const double exact =
                              cell([&] { return feee_entropy_stats(spec, true).mean; });
                          const EntropyStats asym = feee_entropy_asymptotic(spec);
                          return {u, mean, sd, exact, asym.mean, asym.std_dev};
                      });
}

Table cmd_feee_rdm(const Options& opt) {
    const int n = opt.n;
    const auto points = make_grid(grid_or(opt, "-1:0:100"), -1.0, 2.0);
    return fill_table({{"u"},
                       {"mu_minus"},
                       {"mu_zero"},
                       {"mu_plus"},
                       {"r"},
                       {"asym_mu_minus"},
                       {"asym_mu_zero"},
                       {"asym_mu_plus"},
                       {"r_asym"}},
                      points, opt.threads, [n](double u) -> std::vector<double> {
                          const FeeeSpec spec{n, u * n};
                          std::optional<RdmDiagonal> rdm;
                          try {
                              rdm = feee_rdm_mean(spec);
                          } catch (const std::domain_error&) {
                          }
                          const RdmDiagonal asym = feee_rdm_asymptotic(u);
                          return {u,
                                  rdm ? rdm->minus : nan_cell,
                                  rdm ? rdm->zero : nan_cell,
                                  rdm ? rdm->plus : nan_cell,
                                  rdm ? cell([&] { return r_parameter(*rdm); }) : nan_cell,
                                  asym.minus,
                                  asym.zero,
                                  asym.plus,
                                  cell([&] { return r_asymptotic(u); })};
                      });
}

Table cmd_rpse_scan(const Options& opt) {
    const int n = opt.n;
    const auto points = make_grid(grid_or(opt, "-1:1:100"), -1.0, 1.0);
    return fill_table({{"q_max"},
                       {"e_max"},
                       {"ln_dim_exact"},
                       {"ln_dim_gaussian"},
                       {"ln_dim_integral"},
                       {"ln_dim_asym"},
                       {"u_exact"},
                       {"u_corrected"},
                       {"e_variance"},
                       {"entropy_mean"}},
                      points, opt.threads, [n](double q) -> std::vector<double> {
                          const RpseSpec spec{n, q * n};
                          const EnergyMoments em = rpse_internal_energy_exact(spec);
                          return {q,
                                  spec.e_max,
                                  rpse_dimension_exact(spec).log(),
                                  rpse_dimension_gaussian(spec).log(),
                                  cell([&] { return rpse_dimension_integral(spec).log(); }),
                                  rpse_log_dimension_asymptotic(n, q),
                                  em.u_mean,
                                  rpse_internal_energy_asymptotic(n, q, true),
                                  em.e_variance,
                                  cell([&] { return rpse_entropy_mean(spec); })};
                      });
}

Table cmd_rpse_rdm(const Options& opt) {
    const int n = opt.n;
    const auto points = make_grid(grid_or(opt, "-1:0:100"), -1.0, 1.0);
    return fill_table({{"q_max"},
                       {"mu_minus"},
                       {"mu_zero"},
                       {"mu_plus"},
                       {"f_minus"},
                       {"f_zero"},
                       {"f_plus"}},
                      points, opt.threads, [n](double q) -> std::vector<double> {
                          const RdmDiagonal mu = rpse_rdm_exact(RpseSpec{n, q * n});
                          const RdmDiagonal f = rpse_rdm_asymptotic(q);
                          return {q, mu.minus, mu.zero, mu.plus, f.minus, f.zero, f.plus};
                      });
}

Table cmd_eos(const Options& opt) {
    const int n = opt.n > 0 ? opt.n : 1;  // s and beta are per spin, independent of n
    const auto points = make_grid(grid_or(opt, "-1:0:100"), -1.0, 2.0);
    return fill_table({{"u"}, {"s"}, {"beta"}}, points, opt.threads,
                      [n](double u) -> std::vector<double> {
                          const ThermoState st = entropy_equation_of_state(n, u);
                          return {u, st.s, st.beta};
                      });
}

void cmd_sample(const Options& opt) {
    if (opt.ensemble == "feee" && std::isnan(opt.u))
        throw UsageError("sample --ensemble feee requires --u");
    const int n = opt.n;
    const int emax = opt.emax == std::numeric_limits<int>::min() ? n : opt.emax;
    const ActiveSpace space = build_active_space(n, emax);

    std::function<std::vector<double>(std::uint64_t, std::uint64_t)> sampler;
    if (opt.ensemble == "feee") {
        const FeeeSpec spec{n, opt.u * n};
        feee_population_means(spec);  // fail before any worker starts
        const bool renorm = opt.renormalize;
        sampler = [spec, &space, renorm](std::uint64_t seed, std::uint64_t index) {
            return sample_feee(spec, space, seed, index, renorm);
        };
    } else if (opt.mode == "factorized") {
        sampler = [&space](std::uint64_t seed, std::uint64_t index) {
            return sample_rpse_factorized(space, seed, index);
        };
    } else {
        sampler = [&space](std::uint64_t seed, std::uint64_t index) {
            return sample_rpse(space, seed, index);
        };
    }

    const std::vector<std::string> names = {"entropy", "energy", "mu_minus", "mu_zero",
                                            "mu_plus"};
    std::vector<std::function<double(const std::vector<double>&)>> stats = {
        [](const std::vector<double>& p) { return pure_state_entropy(p); },
        [&space](const std::vector<double>& p) { return expectation_energy(p, space); },
        [&space](const std::vector<double>& p) { return reduced_dm(p, space).minus; },
        [&space](const std::vector<double>& p) { return reduced_dm(p, space).zero; },
        [&space](const std::vector<double>& p) { return reduced_dm(p, space).plus; }};
    const std::vector<SampleStats> results =
        ensemble_estimate_multi(sampler, stats, opt.samples, opt.seed, opt.threads);

    OutputSink sink(opt.out);
    std::ostream& os = sink.stream();
    if (opt.format == "csv") {
        os << "statistic,count,mean,variance,std_error\n";
        for (std::size_t j = 0; j < names.size(); ++j) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s,%" PRIu64 ",%.17g,%.17g,%.17g\n",
                          names[j].c_str(), results[j].count, results[j].mean,
                          results[j].variance, results[j].std_error);
            os << buf;
        }
    } else {
        ordered_json j;
        j["command"] = "sample";
        j["config"] = config_echo(opt, "sample");
        ordered_json res;
        for (std::size_t k = 0; k < names.size(); ++k)
            res[names[k]] = {{"count", results[k].count},
                             {"mean", results[k].mean},
                             {"variance", results[k].variance},
                             {"std_error", results[k].std_error}};
        j["results"] = res;
        os << j.dump(2) << '\n';
    }
    os.flush();
}

Table fig_spectrum_histogram(const Options& opt) {
    const int n = opt.n > 0 ? opt.n : 10;
    const Spectrum sp = full_spectrum(n);
    Table t;
    t.cols = {{"i", ColumnKind::Int},
              {"exact_degeneracy", ColumnKind::Int},
              {"gaussian_dos", ColumnKind::Sig}};
    for (const Level& lv : sp.levels) {
        if (!lv.exact_degeneracy)
            throw std::domain_error("fig 2 needs the exact degeneracies, available for n <= " +
                                    std::to_string(exact_degeneracy_max_n));
        t.rows.push_back({static_cast<double>(lv.i),
                          static_cast<double>(*lv.exact_degeneracy), gaussian_dos(sp.spec, lv.i)});
    }
    return t;
}

Table fig_feee_entropy(const Options& opt) {
    const auto ns = size_list(opt, {5, 10, 50});
    const auto points = make_grid(grid_or(opt, "-1:0:100"), -1.0, 2.0);
    std::vector<Column> cols = {{"u"}, {"s_asym"}};
    for (int n : ns) cols.push_back({"s_n" + std::to_string(n)});
    return fill_table(std::move(cols), points, opt.threads,
                      [&ns](double u) -> std::vector<double> {
                          std::vector<double> row = {u, (u + 1.0) * ln3};
                          for (int n : ns) {
                              const FeeeSpec spec{n, u * n};
                              row.push_back(
                                  cell([&] { return feee_entropy_stats(spec).mean / n; }));
                          }
                          return row;
                      });
}

Table fig_feee_ratio(const Options& opt) {
    const auto ns = size_list(opt, {5, 8, 10, 12});
    const auto points = make_grid(grid_or(opt, "-1:0:100"), -1.0, 2.0);
    std::vector<Column> cols = {{"u"}, {"r_asym"}};
    for (int n : ns) cols.push_back({"r_n" + std::to_string(n)});
    return fill_table(std::move(cols), points, opt.threads,
                      [&ns](double u) -> std::vector<double> {
                          std::vector<double> row = {u, cell([&] { return r_asymptotic(u); })};
                          for (int n : ns) {
                              const FeeeSpec spec{n, u * n};
                              row.push_back(
                                  cell([&] { return r_parameter(feee_rdm_mean(spec)); }));
                          }
                          return row;
                      });
}

double per_spin_log_dim_asym(double q) { return q < 0.0 ? occupation_entropy(q) : ln3; }

Table fig_rpse_dimension_routes(const Options& opt) {
    const auto ns = size_list(opt, {10, 30, 100});
    const auto points = make_grid(grid_or(opt, "-1:1:100"), -1.0, 1.0);
    std::vector<Column> cols = {{"q_max"}, {"lnN_over_n_asym"}};
    for (int n : ns) {
        cols.push_back({"exact_n" + std::to_string(n)});
        cols.push_back({"gauss_n" + std::to_string(n)});
        cols.push_back({"integ_n" + std::to_string(n)});
    }
    return fill_table(std::move(cols), points, opt.threads,
                      [&ns](double q) -> std::vector<double> {
                          std::vector<double> row = {q, per_spin_log_dim_asym(q)};
                          for (int n : ns) {
                              const RpseSpec spec{n, q * n};
                              row.push_back(rpse_dimension_exact(spec).log() / n);
                              row.push_back(rpse_dimension_gaussian(spec).log() / n);
                              row.push_back(cell(
                                  [&] { return rpse_dimension_integral(spec).log() / n; }));
                          }
                          return row;
                      });
}

Table fig_rpse_dimension_asymptote(const Options& opt) {
    const auto ns = size_list(opt, {10, 30, 100});
    const auto points = make_grid(grid_or(opt, "-1:1:100"), -1.0, 1.0);
    std::vector<Column> cols = {{"q_max"}, {"lnN_over_n_asym"}};
    for (int n : ns) cols.push_back({"exact_n" + std::to_string(n)});
    return fill_table(std::move(cols), points, opt.threads,
                      [&ns](double q) -> std::vector<double> {
                          std::vector<double> row = {q, per_spin_log_dim_asym(q)};
                          for (int n : ns)
                              row.push_back(rpse_dimension_exact(RpseSpec{n, q * n}).log() / n);
                          return row;
                      });
}

Table fig_rpse_energy(const Options& opt) {
    const auto ns = size_list(opt, {10, 50, 150});
    const auto points = make_grid(grid_or(opt, "-1:0:100"), -1.0, 1.0);
    std::vector<Column> cols = {{"q_max"}, {"u_asym"}};
    for (int n : ns) {
        cols.push_back({"u_exact_n" + std::to_string(n)});
        cols.push_back({"u_corr_n" + std::to_string(n)});
    }
    return fill_table(std::move(cols), points, opt.threads,
                      [&ns](double q) -> std::vector<double> {
                          std::vector<double> row = {q, q < 0.0 ? q : 0.0};
                          for (int n : ns) {
                              row.push_back(
                                  rpse_internal_energy_exact(RpseSpec{n, q * n}).u_mean);
                              row.push_back(rpse_internal_energy_asymptotic(n, q, true));
                          }
                          return row;
                      });
}

Table fig_equation_of_state(const Options& opt) {
    const auto points = make_grid(grid_or(opt, "-0.99:0:100"), -1.0, 2.0);
    return fill_table({{"u"}, {"beta"}}, points, opt.threads,
                      [](double u) -> std::vector<double> {
                          return {u, entropy_equation_of_state(1, u).beta};
                      });
}

Table fig_rpse_rdm(const Options& opt) {
    const auto ns = size_list(opt, {10, 30, 100});
    const auto points = make_grid(grid_or(opt, "-1:0:100"), -1.0, 1.0);
    std::vector<Column> cols = {{"q_max"}, {"f_minus"}, {"f_zero"}, {"f_plus"}};
    for (int n : ns) {
        cols.push_back({"mu_minus_n" + std::to_string(n)});
        cols.push_back({"mu_zero_n" + std::to_string(n)});
        cols.push_back({"mu_plus_n" + std::to_string(n)});
    }
    return fill_table(std::move(cols), points, opt.threads,
                      [&ns](double q) -> std::vector<double> {
                          const RdmDiagonal f = rpse_rdm_asymptotic(q);
                          std::vector<double> row = {q, f.minus, f.zero, f.plus};
                          for (int n : ns) {
                              const RdmDiagonal mu = rpse_rdm_exact(RpseSpec{n, q * n});
                              row.push_back(mu.minus);
                              row.push_back(mu.zero);
                              row.push_back(mu.plus);
                          }
                          return row;
                      });
}

Table cmd_fig(const Options& opt) {
    switch (opt.fig_id) {
        case 2: return fig_spectrum_histogram(opt);
        case 3: return fig_feee_entropy(opt);
        case 4: return fig_feee_ratio(opt);
        case 5: return fig_rpse_dimension_routes(opt);
        case 6: return fig_rpse_dimension_asymptote(opt);
        case 7: return fig_rpse_energy(opt);
        case 8: return fig_equation_of_state(opt);
        case 9: return fig_rpse_rdm(opt);
        default: throw UsageError("fig --id must be between 2 and 9");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact and asymptotic statistics of two pure-state spin ensembles"};
    app.require_subcommand(1);

    Options opt;
    const auto add_common = [&](CLI::App* sub, bool with_grid) {
        sub->add_option("--out", opt.out, "output file (default stdout)");
        sub->add_option("--format", opt.format, "csv or json-summary")
            ->check(CLI::IsMember({"csv", "json-summary"}));
        sub->add_option("--threads", opt.threads, "worker threads, 0 = all cores")
            ->check(CLI::Range(0, 1024));
        sub->add_option("--precision", opt.precision, "significant digits for table values")
            ->check(CLI::Range(3, 17));
        if (with_grid) sub->add_option("--grid", opt.grid, "scan grid as start:stop:steps");
    };

    CLI::App* spectrum = app.add_subcommand("spectrum", "level degeneracies of n spins");
    spectrum->add_option("--n", opt.n, "system size")->required()->check(CLI::Range(1, 2000));
    add_common(spectrum, false);

    CLI::App* feee_entropy =
        app.add_subcommand("feee-entropy", "FEEE entropy statistics over an energy grid");
    feee_entropy->add_option("--n", opt.n, "system size")->required()->check(CLI::Range(1, 2000));
    add_common(feee_entropy, true);

    CLI::App* feee_rdm =
        app.add_subcommand("feee-rdm", "FEEE mean reduced density matrix over an energy grid");
    feee_rdm->add_option("--n", opt.n, "system size")->required()->check(CLI::Range(1, 2000));
    add_common(feee_rdm, true);

    CLI::App* rpse_scan =
        app.add_subcommand("rpse-scan", "RPSE dimension, energy and entropy over a cutoff grid");
    rpse_scan->add_option("--n", opt.n, "system size")->required()->check(CLI::Range(1, 2000));
    add_common(rpse_scan, true);

    CLI::App* rpse_rdm =
        app.add_subcommand("rpse-rdm", "RPSE mean reduced density matrix over a cutoff grid");
    rpse_rdm->add_option("--n", opt.n, "system size")->required()->check(CLI::Range(2, 2000));
    add_common(rpse_rdm, true);

    CLI::App* eos = app.add_subcommand("eos", "entropy and inverse temperature per spin");
    eos->add_option("--n", opt.n, "system size (s and beta are per spin; optional)")
        ->check(CLI::Range(1, 2000));
    add_common(eos, true);

    CLI::App* sample = app.add_subcommand("sample", "Monte Carlo moments of sampled pure states");
    sample->add_option("--ensemble", opt.ensemble, "rpse or feee")
        ->required()
        ->check(CLI::IsMember({"rpse", "feee"}));
    sample->add_option("--n", opt.n, "system size")->required()->check(CLI::Range(2, 12));
    sample->add_option("--emax", opt.emax, "energy cutoff (rpse; default full spectrum)");
    sample->add_option("--u", opt.u, "expectation energy per spin (feee)");
    sample->add_option("--mode", opt.mode, "rpse sampler: simplex or factorized")
        ->check(CLI::IsMember({"simplex", "factorized"}));
    sample->add_flag("--renormalize", opt.renormalize, "renormalize feee draws to unit trace");
    sample->add_option("--samples", opt.samples, "sample count")->check(CLI::Range(2, 100000000));
    sample->add_option("--seed", opt.seed, "RNG seed");
    add_common(sample, false);

    CLI::App* fig = app.add_subcommand("fig", "data table for one of the survey figures");
    fig->add_option("--id", opt.fig_id, "figure number, 2 to 9")->required()->check(CLI::Range(2, 9));
    fig->add_option("--n", opt.n, "replace the default system sizes with one n")
        ->check(CLI::Range(1, 2000));
    add_common(fig, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (spectrum->parsed()) write_table(cmd_spectrum(opt), opt, "spectrum");
        else if (feee_entropy->parsed()) write_table(cmd_feee_entropy(opt), opt, "feee-entropy");
        else if (feee_rdm->parsed()) write_table(cmd_feee_rdm(opt), opt, "feee-rdm");
        else if (rpse_scan->parsed()) write_table(cmd_rpse_scan(opt), opt, "rpse-scan");
        else if (rpse_rdm->parsed()) write_table(cmd_rpse_rdm(opt), opt, "rpse-rdm");
        else if (eos->parsed()) write_table(cmd_eos(opt), opt, "eos");
        else if (sample->parsed()) cmd_sample(opt);
        else if (fig->parsed()) write_table(cmd_fig(opt), opt, "fig");
    } catch (const UsageError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    std::fprintf(stderr, "wall_time_s=%.3f\n", dt.count());
    return 0;
}
