// mudiv: experiment runner for multi-user diversity systems with a random
// number of contending users. Every command writes one CSV with the schema
//   x,value,stderr,method,users,fading,err,snr_db
// where method is one of closed|quad|mc|asymptote. All internal SNRs are
// linear; dB conversion happens only here at the CLI boundary.

#include <CLI11.hpp>

#include <mudiv/mudiv.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace mudiv;

struct CsvRow {
    double x;
    double value;
    double std_error; // 0 for analytic rows
    std::string method;
    std::string users;
    std::string fading;
    std::string err;
    double snr_db;
};

std::string format_g17(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, ptr);
}

// RFC-4180 quoting; model texts like exp:a=1,eta=1 carry commas.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    q += '"';
    return q;
}

void write_csv(const std::string& path, const std::vector<CsvRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << "x,value,stderr,method,users,fading,err,snr_db\n";
    for (const auto& r : rows) {
        out << format_g17(r.x) << ',' << format_g17(r.value) << ',' << format_g17(r.std_error)
            << ',' << csv_field(r.method) << ',' << csv_field(r.users) << ','
            << csv_field(r.fading) << ',' << csv_field(r.err) << ',' << format_g17(r.snr_db)
            << '\n';
    }
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<double> parse_range(const std::string& spec) {
    // "start:step:stop" or a single value
    std::vector<double> parts;
    std::string::size_type pos = 0;
    while (pos <= spec.size()) {
        const auto colon = spec.find(':', pos);
        const auto piece = spec.substr(pos, colon == std::string::npos ? std::string::npos
                                                                       : colon - pos);
        parts.push_back(detail::parse_double(piece, "range element"));
        if (colon == std::string::npos) break;
        pos = colon + 1;
    }
    if (parts.size() == 1) return parts;
    if (parts.size() != 3) throw std::invalid_argument("range must be <value> or start:step:stop");
    const double start = parts[0], step = parts[1], stop = parts[2];
    if (!(step > 0.0) || stop < start)
        throw std::invalid_argument("range requires step > 0 and stop >= start");
    std::vector<double> out;
    for (double v = start; v <= stop + 1e-9 * step; v += step) out.push_back(v);
    return out;
}

struct CommonOpts {
    std::string fading = "rayleigh";
    std::vector<std::string> users;
    std::string err = "exp:a=1,eta=1";
    std::string snr_db = "0:2:20";
    std::vector<double> lambda_grid;
    std::vector<double> x_grid;
    double trials = 100000; // accepts 1e6 notation; 0 disables MC rows
    std::uint64_t seed = 20260811;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::string out;
    std::string config_path;
    bool asymptote = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_err) {
    cmd->add_option("--fading", o.fading, "fading model: rayleigh | nakagami:m=<v> | rician:k=<v>")
        ->capture_default_str();
    cmd->add_option("--users", o.users,
                    "user-count model (repeatable): det:<N> | poisson:<lambda> | geom:<p> | "
                    "geom:mean=<m> | ztpoisson:<lambda>");
    if (with_err)
        cmd->add_option("--err", o.err, "error model: exp:a=<a>,eta=<e> | qf:a=<a>,eta=<e>")
            ->capture_default_str();
    cmd->add_option("--snr-db", o.snr_db, "average SNR sweep, dB: start:step:stop or single value")
        ->capture_default_str();
    cmd->add_option("--lambda-grid", o.lambda_grid, "mean-user-count grid (switches the sweep to lambda)")
        ->delimiter(',');
    cmd->add_option("--x-grid", o.x_grid, "gain-threshold grid")->delimiter(',');
    cmd->add_option("--mc-trials", o.trials, "Monte-Carlo trials per point (0 disables MC rows)")
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "Monte-Carlo seed")->envname("MUDIV_SEED")
        ->capture_default_str();
    cmd->add_option("--workers", o.workers, "Monte-Carlo worker threads")->capture_default_str();
    cmd->add_option("--out", o.out, "output CSV path");
    cmd->add_option("--config", o.config_path,
                    "flat key=value file mirroring the flags; flags override");
}

std::string strip(std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return {};
    s = s.substr(a, b - a + 1);
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
        s = s.substr(1, s.size() - 2);
    return s;
}

// Flat key=value config: every key mirrors a long flag of the subcommand;
// keys given on the command line keep their values, unknown keys are errors.
void apply_config(CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = strip(line);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        " is not key=value");
        entries.emplace_back(strip(text.substr(0, eq)), strip(text.substr(eq + 1)));
    }
    std::vector<CLI::Option*> touched;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& key = entries[i].first;
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr)
            throw std::invalid_argument("unknown config key '" + key + "' in " + path);
        if (opt->count() > 0) continue; // flags override the file
        bool seen_before = false;
        for (std::size_t j = 0; j < i; ++j) seen_before = seen_before || entries[j].first == key;
        if (seen_before) continue; // all values of a repeated key applied in one pass below
        for (std::size_t j = i; j < entries.size(); ++j)
            if (entries[j].first == key) opt->add_result(entries[j].second);
        touched.push_back(opt);
    }
    for (auto* opt : touched) opt->run_callback();
}

SimConfig sim_config(const CommonOpts& o) {
    return SimConfig{static_cast<std::uint64_t>(o.trials), o.seed, o.workers};
}

std::vector<std::string> users_or_default(const CommonOpts& o) {
    return o.users.empty() ? std::vector<std::string>{"poisson:4"} : o.users;
}

void warn_if_clamped(const ErrorModel& err) {
    if (err.error_at_zero_snr() > 1.0)
        std::cerr << "warning: Pe(0) = " << err.error_at_zero_snr()
                  << " exceeds 1 for the chosen alpha; values are clamped at 1\n";
}

// Reparameterize a family text form to a target mean, so lambda sweeps
// compare the families at equal average user counts.
std::string family_at_mean(const std::string& form, double lambda) {
    const auto base = form.substr(0, form.find(':'));
    if (base == "det") return "det:" + std::to_string(static_cast<long long>(std::llround(lambda)));
    if (base == "poisson") return "poisson:" + format_g17(lambda);
    if (base == "geom") return "geom:mean=" + format_g17(lambda);
    if (base == "ztpoisson")
        return "ztpoisson:" + format_g17(UserCountModel::zt_poisson_with_mean(lambda).param);
    throw std::invalid_argument("cannot sweep lambda for user model '" + form + "'");
}

double single_snr_db(const CommonOpts& o) {
    const auto grid = parse_range(o.snr_db);
    if (grid.size() != 1)
        throw std::invalid_argument("this sweep needs a single --snr-db value");
    return grid.front();
}

std::string default_out(const std::string& name) { return "mudiv-" + name + ".csv"; }

// ---------------------------------------------------------------- error-rate

void run_error_rate(const CommonOpts& o) {
    const FadingModel fading = parse_fading(o.fading);
    const ErrorModel err = parse_error_model(o.err);
    warn_if_clamped(err);
    std::vector<CsvRow> rows;

    auto emit = [&](const std::string& label, const UserCountModel& users, double x, double db) {
        const SnrPoint snr = SnrPoint::from_db(db);
        const double quad = avg_error_random_n(snr, users, fading, err);
        rows.push_back({x, quad, 0.0, "quad", label, o.fading, o.err, db});
        if (users.kind == UserCountKind::poisson && fading.kind == FadingKind::rayleigh &&
            err.form == ErrorForm::exponential) {
            rows.push_back({x, poisson_rayleigh_error_closed(snr, users.param, err), 0.0, "closed",
                            label, o.fading, o.err, db});
        }
        if (o.trials > 0) {
            const auto mc = mc_error_rate(snr, make_best_gain_law(fading, users), err, sim_config(o));
            rows.push_back({x, mc.mean, mc.std_error, "mc", label, o.fading, o.err, db});
        }
        if (o.asymptote)
            rows.push_back({x, high_snr_asymptote(snr, users, fading, err), 0.0, "asymptote",
                            label, o.fading, o.err, db});
    };

    if (!o.lambda_grid.empty()) {
        const double db = single_snr_db(o);
        for (const auto& form : users_or_default(o))
            for (double lambda : o.lambda_grid) {
                const auto label = family_at_mean(form, lambda);
                emit(label, parse_usercount(label), lambda, db);
            }
    } else {
        for (const auto& form : users_or_default(o)) {
            const UserCountModel users = parse_usercount(form);
            for (double db : parse_range(o.snr_db)) emit(form, users, db, db);
        }
    }
    write_csv(o.out, rows);
    std::cout << "wrote " << rows.size() << " rows to " << o.out << "\n";
}

// ------------------------------------------------------------------ capacity

void run_capacity(const CommonOpts& o) {
    const FadingModel fading = parse_fading(o.fading);
    std::vector<CsvRow> rows;

    auto emit = [&](const std::string& label, const UserCountModel& users, double x, double db) {
        const SnrPoint snr = SnrPoint::from_db(db);
        rows.push_back({x, ergodic_capacity_random_n(snr, users, fading), 0.0, "quad", label,
                        o.fading, "-", db});
        if (o.trials > 0) {
            const auto mc = mc_capacity(snr, make_best_gain_law(fading, users), sim_config(o));
            rows.push_back({x, mc.mean, mc.std_error, "mc", label, o.fading, "-", db});
        }
    };

    if (!o.lambda_grid.empty()) {
        const double db = single_snr_db(o);
        for (const auto& form : users_or_default(o))
            for (double lambda : o.lambda_grid) {
                const auto label = family_at_mean(form, lambda);
                emit(label, parse_usercount(label), lambda, db);
            }
    } else {
        for (const auto& form : users_or_default(o)) {
            const UserCountModel users = parse_usercount(form);
            for (double db : parse_range(o.snr_db)) emit(form, users, db, db);
        }
    }
    write_csv(o.out, rows);
    std::cout << "wrote " << rows.size() << " rows to " << o.out << "\n";
}

// -------------------------------------------------------------------- outage

void run_outage(const CommonOpts& o) {
    const FadingModel fading = parse_fading(o.fading);
    const std::vector<double> grid =
        o.x_grid.empty() ? std::vector<double>{0.0, 0.25, 0.5, 1.0, 2.0, 4.0} : o.x_grid;
    std::vector<CsvRow> rows;
    for (const auto& form : users_or_default(o)) {
        const UserCountModel users = parse_usercount(form);
        const BestGainLaw law = make_best_gain_law(fading, users);
        for (double x : grid) {
            rows.push_back({x, best_cdf(law, x), 0.0, "closed", form, o.fading, "-", 0.0});
            if (o.trials > 0) {
                const auto mc = mc_outage(x, law, sim_config(o));
                rows.push_back({x, mc.mean, mc.std_error, "mc", form, o.fading, "-", 0.0});
            }
        }
    }
    write_csv(o.out, rows);
    std::cout << "wrote " << rows.size() << " rows to " << o.out << "\n";
}

// --------------------------------------------------------------------- order

void run_order(const CommonOpts& o) {
    if (o.users.size() != 2)
        throw std::invalid_argument("order needs exactly two --users models");
    const FadingModel fading = parse_fading(o.fading);
    const ErrorModel err = parse_error_model(o.err);
    warn_if_clamped(err);
    const UserCountModel x = parse_usercount(o.users[0]);
    const UserCountModel y = parse_usercount(o.users[1]);

    const OrderingVerdict verdict = lt_order_check(x, y);
    switch (verdict.relation) {
    case LtRelation::x_le_y:
        std::cout << "verdict: " << o.users[0] << " <=Lt " << o.users[1];
        break;
    case LtRelation::y_le_x:
        std::cout << "verdict: " << o.users[1] << " <=Lt " << o.users[0];
        break;
    case LtRelation::incomparable:
        std::cout << "verdict: incomparable";
        break;
    }
    std::cout << " (grid " << verdict.grid_size << ", max violation " << verdict.max_violation
              << ")\n";

    std::vector<CsvRow> rows;
    std::vector<SnrPoint> snrs;
    for (double db : parse_range(o.snr_db)) {
        snrs.push_back(SnrPoint::from_db(db));
        for (const auto& form : o.users) {
            const UserCountModel m = parse_usercount(form);
            rows.push_back({db, avg_error_random_n(snrs.back(), m, fading, err), 0.0, "quad",
                            form, o.fading, o.err, db});
            rows.push_back({db, ergodic_capacity_random_n(snrs.back(), m, fading), 0.0, "quad",
                            form, o.fading, "-", db});
        }
    }
    if (verdict.relation != LtRelation::incomparable) {
        const bool consistent = ordering_consequence_check(x, y, fading, err, snrs);
        std::cout << "metric ordering consistent with the LT order at all SNRs: "
                  << (consistent ? "yes" : "NO") << "\n";
    }
    write_csv(o.out, rows);
    std::cout << "wrote " << rows.size() << " rows to " << o.out << "\n";
}

// ------------------------------------------------------------------ cm-check

void run_cm_check(const CommonOpts& o, int max_n, int order_err, int order_cap) {
    const FadingModel fading = parse_fading(o.fading);
    const ErrorModel err = parse_error_model(o.err);
    warn_if_clamped(err);
    std::vector<CsvRow> rows;
    for (double db : parse_range(o.snr_db)) {
        const SnrPoint snr = SnrPoint::from_db(db);
        std::vector<double> pe, cap;
        for (int n = 1; n <= max_n; ++n) {
            pe.push_back(avg_error_fixed_n(snr, n, fading, err));
            cap.push_back(ergodic_capacity_fixed_n(snr, n, fading));
            rows.push_back({static_cast<double>(n), pe.back(), 0.0, "quad", "det", o.fading,
                            o.err, db});
            rows.push_back({static_cast<double>(n), cap.back(), 0.0, "quad", "det", o.fading,
                            "-", db});
        }
        const CmReport rpe = check_cm(pe, order_err, 1e-9);
        const CmReport rcap = check_cmd(cap, order_cap, 1e-9);
        std::cout << "snr " << db << " dB: error-rate c.m. up to order " << order_err << ": "
                  << (rpe.passed() ? "PASS" : "FAIL") << "; capacity c.m.d. up to order "
                  << order_cap << ": " << (rcap.passed() ? "PASS" : "FAIL") << "\n";
        for (const auto* rep : {&rpe, &rcap})
            if (!rep->passed())
                std::cout << "  first violation: order " << rep->first_violation->order
                          << " index " << rep->first_violation->index << " magnitude "
                          << rep->first_violation->magnitude << "\n";
    }
    write_csv(o.out, rows);
    std::cout << "wrote " << rows.size() << " rows to " << o.out << "\n";
}

// -------------------------------------------------------------------- jensen

void run_jensen(const CommonOpts& o) {
    const FadingModel fading = parse_fading(o.fading);
    const ErrorModel err = parse_error_model(o.err);
    warn_if_clamped(err);
    const std::vector<double> grid =
        o.lambda_grid.empty() ? std::vector<double>{4, 16, 64, 256} : o.lambda_grid;
    const double db = single_snr_db(o);
    const auto scan = jensen_tightness_scan(SnrPoint::from_db(db), grid, fading, err);
    std::vector<CsvRow> rows;
    std::cout << "lambda        gap   normalized_gap\n";
    for (const auto& p : scan) {
        std::printf("%6g  %.3e  %.6f\n", p.lambda, p.gap, p.normalized_gap);
        rows.push_back({p.lambda, p.normalized_gap, 0.0, "quad",
                        "poisson:" + format_g17(p.lambda), o.fading, o.err, db});
    }
    write_csv(o.out, rows);
    std::cout << "wrote " << rows.size() << " rows to " << o.out << "\n";
}

// ----------------------------------------------------------------- diversity

void run_diversity(const CommonOpts& o, const std::string& window_spec) {
    const FadingModel fading = parse_fading(o.fading);
    const ErrorModel err = parse_error_model(o.err);
    warn_if_clamped(err);
    const auto grid = parse_range(o.snr_db);
    std::pair<double, double> window{grid.front(), grid.back()};
    if (!window_spec.empty()) {
        const auto colon = window_spec.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("--window must be lo:hi");
        window = {detail::parse_double(window_spec.substr(0, colon), "window low edge"),
                  detail::parse_double(window_spec.substr(colon + 1), "window high edge")};
        if (!(window.first < window.second))
            throw std::invalid_argument("--window must satisfy lo < hi");
    }
    std::vector<CsvRow> rows;
    for (const auto& form : users_or_default(o)) {
        const UserCountModel users = parse_usercount(form);
        std::vector<std::pair<double, double>> curve;
        for (double db : grid) {
            const SnrPoint snr = SnrPoint::from_db(db);
            const double v = avg_error_random_n(snr, users, fading, err);
            curve.emplace_back(db, v);
            rows.push_back({db, v, 0.0, "quad", form, o.fading, o.err, db});
            rows.push_back({db, high_snr_asymptote(snr, users, fading, err), 0.0, "asymptote",
                            form, o.fading, o.err, db});
        }
        const double slope = diversity_order_fit(curve, window);
        std::cout << form << ": fitted diversity order over [" << window.first << ", "
                  << window.second << "] dB = " << slope << "\n";
        rows.push_back({0.5 * (window.first + window.second), slope, 0.0, "asymptote",
                        "slope-fit", o.fading, o.err, 0.0});
    }
    write_csv(o.out, rows);
    std::cout << "wrote " << rows.size() << " rows to " << o.out << "\n";
}

// -------------------------------------------------------------------- gumbel

void run_gumbel(const CommonOpts& o) {
    const FadingModel fading = parse_fading(o.fading);
    const std::vector<double> grid =
        o.lambda_grid.empty() ? std::vector<double>{10, 100, 1000} : o.lambda_grid;
    std::vector<CsvRow> rows;
    for (double lambda : grid) {
        const double ks = mc_gumbel_ks(lambda, fading, sim_config(o));
        std::cout << "lambda " << lambda << ": KS distance to Gumbel = " << ks << "\n";
        rows.push_back({lambda, ks, 0.0, "mc", "poisson:" + format_g17(lambda), o.fading, "-",
                        0.0});
    }
    write_csv(o.out, rows);
    std::cout << "wrote " << rows.size() << " rows to " << o.out << "\n";
}

// -------------------------------------------------------------------- figure

void run_figure(int n, CommonOpts o, const std::string& out_dir) {
    if (o.out.empty()) o.out = out_dir + "/figure" + std::to_string(n) + ".csv";
    switch (n) {
    case 1: // error rate vs lambda at 6 dB, all user families
        o.snr_db = "6";
        o.err = "qf:a=1,eta=2";
        o.users = {"det:1", "poisson:1", "geom:mean=1", "ztpoisson:1"};
        if (o.lambda_grid.empty()) o.lambda_grid = {1, 2, 4, 8, 16, 32, 64};
        run_error_rate(o);
        return;
    case 2: // capacity vs lambda at 10 dB
        o.snr_db = "10";
        o.users = {"det:1", "poisson:1", "geom:mean=1", "ztpoisson:1"};
        if (o.lambda_grid.empty()) o.lambda_grid = {1, 2, 4, 8, 16, 32, 64};
        run_capacity(o);
        return;
    case 3: // outage probability vs threshold (closed form of the Poisson outage vs MC)
        o.users = {"poisson:4", "poisson:16", "poisson:64"};
        if (o.x_grid.empty())
            for (double x = 0.0; x <= 6.0001; x += 0.25) o.x_grid.push_back(x);
        run_outage(o);
        return;
    case 4: // error rate vs SNR, Poisson vs geometric at equal mean
        o.users = {"poisson:4", "geom:mean=4"};
        o.err = "qf:a=1,eta=2";
        o.snr_db = "0:2:20";
        run_error_rate(o);
        return;
    case 5: // capacity vs SNR, Poisson vs geometric at equal mean
        o.users = {"poisson:4", "geom:mean=4"};
        o.snr_db = "0:2:20";
        run_capacity(o);
        return;
    case 6: // closed-form error rate vs MC over SNR for Poisson users
        o.users = {"poisson:1", "poisson:4", "poisson:16"};
        o.err = "exp:a=1,eta=1";
        o.snr_db = "0:2:20";
        run_error_rate(o);
        return;
    case 7: // diversity order of the zero-truncated Poisson system
        o.users = {"ztpoisson:2"};
        o.err = "exp:a=1,eta=1";
        o.snr_db = "0:2.5:45";
        run_diversity(o, "35:45");
        return;
    default:
        throw std::invalid_argument("figure number must be in 1..7");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-user diversity with a random number of users: analysis & simulation"};
    app.require_subcommand(1);

    CommonOpts err_opts, cap_opts, out_opts, ord_opts, cm_opts, jen_opts, div_opts, gum_opts,
        fig_opts;
    int cm_max_n = 40, cm_order_err = 4, cm_order_cap = 3;
    std::string div_window;
    int fig_n = 0;
    std::string fig_out_dir = ".";

    auto* c_err = app.add_subcommand("error-rate", "average error rate vs SNR or vs lambda");
    add_common(c_err, err_opts, true);
    c_err->add_flag("--asymptote", err_opts.asymptote, "also emit high-SNR asymptote rows");

    auto* c_cap = app.add_subcommand("capacity", "ergodic capacity vs SNR or vs lambda");
    add_common(c_cap, cap_opts, false);

    auto* c_out = app.add_subcommand("outage", "outage probability vs gain threshold");
    add_common(c_out, out_opts, false);

    auto* c_ord = app.add_subcommand("order", "Laplace-transform ordering of two user models");
    add_common(c_ord, ord_opts, true);

    auto* c_cm = app.add_subcommand("cm-check", "complete-monotonicity scan over N");
    add_common(c_cm, cm_opts, true);
    c_cm->add_option("--max-n", cm_max_n, "largest N in the sequence")->capture_default_str();
    c_cm->add_option("--order", cm_order_err, "alternation order for the error rate")
        ->capture_default_str();
    c_cm->add_option("--cap-order", cm_order_cap, "alternation order for the capacity derivative")
        ->capture_default_str();

    auto* c_jen = app.add_subcommand("jensen", "Jensen-gap tightness scan over lambda");
    add_common(c_jen, jen_opts, true);

    auto* c_div = app.add_subcommand("diversity", "high-SNR diversity-order fit");
    add_common(c_div, div_opts, true);
    c_div->add_option("--window", div_window, "fit window lo:hi in dB (default: whole sweep)");

    auto* c_gum = app.add_subcommand("gumbel", "KS distance of the normalized best gain to Gumbel");
    add_common(c_gum, gum_opts, false);

    auto* c_fig = app.add_subcommand("figure", "emit the data series for one study figure (1..7)");
    add_common(c_fig, fig_opts, true);
    c_fig->add_option("n", fig_n, "figure number")->required()->check(CLI::Range(1, 7));
    c_fig->add_option("--out-dir", fig_out_dir, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (const auto& [cmd, opts] :
             std::initializer_list<std::pair<CLI::App*, CommonOpts*>>{
                 {c_err, &err_opts}, {c_cap, &cap_opts}, {c_out, &out_opts}, {c_ord, &ord_opts},
                 {c_cm, &cm_opts}, {c_jen, &jen_opts}, {c_div, &div_opts}, {c_gum, &gum_opts},
                 {c_fig, &fig_opts}})
            if (cmd->parsed()) apply_config(cmd, opts->config_path);

        if (c_err->parsed()) {
            if (err_opts.out.empty()) err_opts.out = default_out("error-rate");
            run_error_rate(err_opts);
        } else if (c_cap->parsed()) {
            if (cap_opts.out.empty()) cap_opts.out = default_out("capacity");
            run_capacity(cap_opts);
        } else if (c_out->parsed()) {
            if (out_opts.out.empty()) out_opts.out = default_out("outage");
            run_outage(out_opts);
        } else if (c_ord->parsed()) {
            if (ord_opts.out.empty()) ord_opts.out = default_out("order");
            run_order(ord_opts);
        } else if (c_cm->parsed()) {
            if (cm_opts.out.empty()) cm_opts.out = default_out("cm-check");
            run_cm_check(cm_opts, cm_max_n, cm_order_err, cm_order_cap);
        } else if (c_jen->parsed()) {
            if (jen_opts.out.empty()) jen_opts.out = default_out("jensen");
            run_jensen(jen_opts);
        } else if (c_div->parsed()) {
            if (div_opts.out.empty()) div_opts.out = default_out("diversity");
            run_diversity(div_opts, div_window);
        } else if (c_gum->parsed()) {
            if (gum_opts.out.empty()) gum_opts.out = default_out("gumbel");
            run_gumbel(gum_opts);
        } else if (c_fig->parsed()) {
            run_figure(fig_n, fig_opts, fig_out_dir);
        }
    } catch (const std::logic_error& e) {
        // bad model texts, grids, or parameter domains: configuration errors
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
