#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace coopcli {

using namespace coop;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Scheme parse_scheme(const std::string& s) {
    if (s == "centralized") return Scheme::Centralized;
    if (s == "decentralized") return Scheme::Decentralized;
    if (s == "bounds") return Scheme::Bounds;
    throw UsageError("unknown scheme '" + s + "' (expected centralized, decentralized or bounds)");
}

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Centralized: return "centralized";
        case Scheme::Decentralized: return "decentralized";
        case Scheme::Bounds: return "bounds";
    }
    return "?";
}

std::vector<int> parse_demands(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw UsageError("bad demand list '" + text + "'");
        }
    }
    return out;
}

std::string json_scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << v.get<double>();
        return os.str();
    }
    if (v.is_array()) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + json_scalar(v[i]);
        return s;
    }
    throw UsageError("unsupported value in config file: " + v.dump());
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("cannot parse '" + path + "': " + e.what());
    }
}

// Settings shared by all subcommands; the config file fills them first and
// command-line flags override.
struct Settings {
    std::string scheme = "centralized";
    int N = 20;
    int K = 10;
    std::string M = "0";
    int alpha_max = 1;
    int alpha = 0;
    std::string lambda;
    std::string grid;
    std::string var;
    std::string mode = "fluid";
    std::uint64_t seed = 1;
    std::string format = "csv";
    std::string out;
    long long F = 0;
    std::string demands;
    int threads = 0;
    int round = 0;
    std::string log;
    bool alpha_max_given = false;
};

void apply_config(Settings& s, const json& j) {
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    for (auto& [key, v] : j.items()) {
        std::string val = json_scalar(v);
        try {
            if (key == "scheme") s.scheme = val;
            else if (key == "N") s.N = std::stoi(val);
            else if (key == "K") s.K = std::stoi(val);
            else if (key == "M") s.M = val;
            else if (key == "alpha_max") {
                s.alpha_max = std::stoi(val);
                s.alpha_max_given = true;
            }
            else if (key == "alpha") s.alpha = std::stoi(val);
            else if (key == "lambda") s.lambda = val;
            else if (key == "grid") s.grid = val;
            else if (key == "var") s.var = val;
            else if (key == "mode") s.mode = val;
            else if (key == "seed") s.seed = std::stoull(val);
            else if (key == "format") s.format = val;
            else if (key == "out") s.out = val;
            else if (key == "F") s.F = std::stoll(val);
            else if (key == "demands") s.demands = val;
            else if (key == "threads") s.threads = std::stoi(val);
            else throw UsageError("unknown config key '" + key + "'");
        } catch (const std::logic_error&) {
            throw UsageError("bad value for config key '" + key + "'");
        }
    }
}

void add_common(CLI::App* sub, Settings& s) {
    sub->add_option("--scheme", s.scheme, "centralized | decentralized | bounds");
    sub->add_option("--N", s.N, "number of files");
    sub->add_option("--K", s.K, "number of users");
    sub->add_option("--M", s.M, "cache size in files (rational, e.g. 4 or 5/2)");
    sub->add_option("--alpha-max", s.alpha_max, "max parallel sender groups")->each([&](const std::string&) {
        s.alpha_max_given = true;
    });
    sub->add_option("--mode", s.mode, "fluid | bits");
    sub->add_option("--seed", s.seed, "PRNG seed");
    sub->add_option("--out", s.out, "output file (default stdout)");
    sub->add_option("--format", s.format, "csv | json");
}

SystemConfig config_from(const Settings& s, long long F = 1) {
    SystemConfig c;
    c.N = s.N;
    c.K = s.K;
    c.M = parse_rational(s.M);
    c.alpha_max = s.alpha_max_given ? s.alpha_max : std::max(1, s.K / 2);
    c.F = F;
    c.validate();
    return c;
}

void write_opt(std::ostream& os, const std::optional<Rational>& v, bool inf = false) {
    if (inf) {
        os << "inf,inf";
        return;
    }
    if (v) os << decimal(*v) << ',' << to_string(*v);
    else os << ',';
}

json json_opt(const std::optional<Rational>& v) {
    if (!v) return nullptr;
    return to_double(*v);
}

json json_exact(const std::optional<Rational>& v, bool inf = false) {
    if (inf) return "inf";
    if (!v) return nullptr;
    return to_string(*v);
}

int run_sweep(const Settings& s, std::ostream& out, std::ostream& err) {
    SweepSpec spec;
    spec.scheme = parse_scheme(s.scheme);
    spec.N = s.N;
    spec.K = s.K;
    spec.alpha_max = s.alpha_max_given ? s.alpha_max : std::max(1, s.K / 2);
    spec.threads = s.threads;
    std::string var = s.var.empty() ? (spec.scheme == Scheme::Decentralized ? "p" : "M") : s.var;
    if (var != "M" && var != "p") throw UsageError("--var must be M or p");
    spec.grid_is_p = var == "p";
    std::string grid = s.grid;
    if (!grid.empty() && std::ifstream(grid).good()) {
        json j = load_json(grid);
        if (j.is_object()) {
            if (j.contains("var")) spec.grid_is_p = j["var"].get<std::string>() == "p";
            j = j.value("values", json::array());
        }
        grid = json_scalar(j);
    }
    if (grid.empty()) {
        spec.grid = {parse_rational(s.M)};
        spec.grid_is_p = false;
    } else {
        spec.grid = parse_grid(grid);
    }
    for (auto& v : spec.grid) {
        Rational hi = spec.grid_is_p ? Rational(1) : Rational(spec.N);
        if (v < 0 || v > hi) throw UsageError("grid value " + to_string(v) + " outside [0, " + to_string(hi) + "]");
    }
    if (spec.grid.empty()) err << "warning: empty grid, no rows emitted\n";
    auto rows = sweep_rows(spec);
    std::ofstream file;
    std::ostream* os = &out;
    if (!s.out.empty()) {
        file.open(s.out);
        if (!file) throw UsageError("cannot write '" + s.out + "'");
        os = &file;
    }
    if (s.format == "csv") write_csv(*os, rows);
    else if (s.format == "json") write_json(*os, rows);
    else throw UsageError("--format must be csv or json");
    return 0;
}

int run_verify(const std::string& grid_path, const Settings& s, std::ostream& out, std::ostream& err) {
    json g = grid_path.empty() ? json::object() : load_json(grid_path);
    if (!g.is_object()) throw UsageError("grid file must hold a JSON object");
    std::ofstream file;
    std::ostream* os = &out;
    if (!s.out.empty()) {
        file.open(s.out);
        if (!file) throw UsageError("cannot write '" + s.out + "'");
        os = &file;
    }
    if (g.empty()) {
        err << "warning: grid is empty, nothing to verify\n";
        *os << "PASS (vacuous)\n";
        return 0;
    }
    bool ok = true;
    auto report = [&](const std::string& name, bool pass, const std::string& detail,
                      const std::vector<std::string>& problems) {
        *os << (pass ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
        for (auto& p : problems) *os << "  violation: " << p << '\n';
        ok = ok && pass;
    };
    for (auto& [key, sec] : g.items()) {
        if (key == "centralized_gap") {
            auto r = verify_gap_centralized(sec.at("K_min"), sec.at("K_max"), sec.value("N_factor", 2),
                                            parse_rational(json_scalar(sec.value("bound", json("31")))),
                                            parse_rational(json_scalar(sec.value("bound_high_t", json("2")))));
            report(key, r.ok(),
                   std::to_string(r.points) + " points, worst " + r.worst.str() + ", worst with t>=K-1 " +
                       r.worst_high_t.str(),
                   r.violations);
        } else if (key == "decentralized_gap") {
            auto facs = sec.value("N_factors", std::vector<int>{1, 2});
            auto r = verify_gap_decentralized(sec.at("K_min"), sec.at("K_max"), facs, sec.value("p_steps", 100));
            std::string detail = std::to_string(r.points) + " points";
            for (auto& [b, pt] : r.worst) detail += "; worst [" + std::string(branch_name(b)) + "] " + pt.str();
            report(key, r.ok(), detail, r.violations);
            for (auto& f : r.flags) *os << "  flag: " << f << '\n';
        } else if (key == "p_threshold") {
            auto r = verify_threshold(sec.at("K_min"), sec.at("K_max"));
            std::ostringstream d;
            d.precision(9);
            d << "p_th(K_min)=" << r.p_th.front().mid() << " p_th(K_max)=" << r.p_th.back().mid();
            report(key, r.ok(), d.str(), r.violations);
        } else if (key == "ru_bound") {
            auto r = verify_ru_bound(sec.at("K_min"), sec.at("K_max"), sec.value("p_steps", 100));
            report(key, r.ok(), std::to_string(r.points) + " points", r.violations);
        } else if (key == "threshold_load") {
            auto bad = verify_threshold_load(sec.at("K_min"), sec.at("K_max"), sec.value("p_steps", 100));
            report(key, bad.empty(), "R_u >= R_empty above p_th", bad);
        } else {
            throw UsageError("unknown grid section '" + key + "'");
        }
    }
    *os << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? 0 : 1;
}

int run_simulate(const Settings& s, std::ostream& out) {
    Scheme scheme = parse_scheme(s.scheme);
    if (scheme == Scheme::Bounds) throw UsageError("simulate needs scheme centralized or decentralized");
    if (s.mode != "fluid" && s.mode != "bits") throw UsageError("--mode must be fluid or bits");
    SystemConfig c = config_from(s);
    std::vector<int> demands = s.demands.empty() ? identity_demands(c.K) : parse_demands(s.demands);
    check_demands(demands, c.K, c.N);
    std::ofstream logfile;
    if (!s.log.empty()) {
        logfile.open(s.log);
        if (!logfile) throw UsageError("cannot write '" + s.log + "'");
    }
    if (scheme == Scheme::Centralized) {
        if (!c.integer_t()) throw UsageError("simulation needs integer t = KM/N");
        int alpha = s.alpha ? s.alpha : choose_alpha(c);
        std::optional<Rational> lambda;
        if (!s.lambda.empty()) lambda = parse_rational(s.lambda);
        BigInt need = centralized_required_F(c, alpha, lambda);
        c.F = s.F ? s.F : to_ll(need);
        auto r = run_centralized(c, alpha, demands, s.seed, lambda);
        auto plan = make_split_plan(c, alpha, lambda);
        std::size_t user_syms = 0;
        for (auto& rec : r.log.records) user_syms += rec.sender != 0;
        out << "scheme=centralized " << c.str() << " t=" << to_string(c.t()) << " alpha=" << alpha
            << " lambda=" << to_string(plan.lambda) << " L1=" << plan.L1 << " F=" << c.F << '\n';
        if (r.pico_count)
            out << "user schedule: " << r.pico_count << " pico-files per mini-file (" << r.strategy << ")\n";
        out << "server symbols: " << r.log.records.size() - user_syms << ", user symbols: " << user_syms << '\n';
        out << "closed form: R1=" << to_string(r.closed_form.R1) << " R2=" << to_string(r.closed_form.R2)
            << " T=" << to_string(r.closed_form.T) << '\n';
        out << "measured: R1=" << to_string(r.R1) << " R2=" << to_string(r.R2) << " T=" << to_string(r.T) << ", "
            << (r.decode.ok ? "decode OK" : "decode FAILED: " + r.decode.failure) << '\n';
        if (logfile) write_log(logfile, r.log);
        return r.decode.ok ? 0 : 1;
    }
    Mode mode;
    if (s.mode == "fluid") mode = Mode::Fluid;
    else if (s.mode == "bits") mode = Mode::Bits;
    else throw UsageError("--mode must be fluid or bits");
    c.F = s.F ? s.F : 10000;
    auto r = run_decentralized(c, demands, s.seed, {mode, true});
    out << "scheme=decentralized " << c.str() << " p=" << to_string(c.p()) << " mode=" << s.mode;
    if (mode == Mode::Bits) out << " F=" << c.F << " seed=" << s.seed;
    out << '\n';
    out << "lambda=" << to_string(r.closed_form.lambda) << " R_empty=" << to_string(*r.closed_form.R_empty)
        << " R_s=" << to_string(*r.closed_form.R_s) << " R_u=" << to_string(*r.closed_form.R_u) << '\n';
    for (auto& ri : r.rounds) {
        out << "round s=" << ri.s << ": case " << ri.kase.id << ", alpha_D=" << ri.kase.alpha_D << ", "
            << ri.partitions << " partitions";
        if (ri.kase.id == 3)
            out << ", u1 fragments " << ri.fragments << ", u2 fragments " << ri.fragments_rem
                << ", lambda2=" << to_string(lambda2_split(c.K, ri.s));
        else
            out << ", fragments " << ri.fragments;
        out << '\n';
    }
    if (s.round) {
        if (s.round < 2 || s.round > c.K) throw UsageError("--round must lie in 2..K");
        CaseInfo ci = select_case(c.K, s.round, c.alpha_max);
        auto parts = ci.id == 3 ? enumerate_remainder_partitions(c.K, s.round)
                                : enumerate_equal_partitions(c.K, s.round, ci.alpha_D);
        out << "round " << s.round << " partitions (" << parts.size() << "):\n";
        for (std::size_t i = 0; i < parts.size(); ++i) out << "  " << i + 1 << ": " << parts[i].str() << '\n';
    }
    out << "closed form: R1=" << to_string(r.closed_form.R1) << " R2=" << to_string(r.closed_form.R2)
        << " T=" << to_string(r.closed_form.T) << '\n';
    if (mode == Mode::Fluid) {
        out << "measured: R1=" << to_string(r.R1) << " R2=" << to_string(r.R2) << " T=" << to_string(r.T) << ", "
            << (r.decode.ok ? "structure OK" : "structure FAILED: " + r.decode.failure) << '\n';
        if (logfile) {
            auto run = build_decentralized_schedule(c.K, c.p(), c.alpha_max, demands);
            write_fluid_log(logfile, run.schedule, c.F);
        }
    } else {
        out << "measured: R1=" << decimal(r.R1) << " R2=" << decimal(r.R2) << " T=" << decimal(r.T) << ", "
            << (r.decode.ok ? "decode OK" : "decode FAILED: " + r.decode.failure) << '\n';
        if (logfile) write_log(logfile, r.log);
    }
    return r.decode.ok ? 0 : 1;
}

}  // namespace

std::string decimal(const Rational& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", to_double(r));
    return buf;
}

std::vector<Rational> parse_grid(const std::string& text) {
    std::vector<Rational> out;
    if (text.empty()) return out;
    auto colon = text.find(':');
    try {
        if (colon != std::string::npos) {
            auto colon2 = text.find(':', colon + 1);
            if (colon2 == std::string::npos) throw UsageError("range grid needs start:stop:step");
            Rational a = parse_rational(text.substr(0, colon));
            Rational b = parse_rational(text.substr(colon + 1, colon2 - colon - 1));
            Rational step = parse_rational(text.substr(colon2 + 1));
            if (step <= 0) throw UsageError("grid step must be positive");
            for (Rational v = a; v <= b; v += step) out.push_back(v);
            return out;
        }
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return out;
}

Row evaluate_point(Scheme scheme, const SystemConfig& cfg) {
    Row row;
    row.scheme = scheme_name(scheme);
    row.N = cfg.N;
    row.K = cfg.K;
    row.alpha_max = cfg.alpha_max;
    row.M = cfg.M;
    row.p = cfg.p();
    auto lb = lower_bound(cfg);
    row.T_lower = lb.T_lower;
    row.LB_half = lb.half;
    row.LB_cut = lb.cut;
    row.LB_coop = lb.coop;
    if (scheme == Scheme::Centralized) {
        auto r = centralized_delay(cfg);
        row.T_upper = r.T;
        row.R1 = r.R1;
        row.R2 = r.R2;
        if (cfg.integer_t()) {
            row.alpha = r.alpha;
            row.lambda = r.lambda;
            int t = cfg.t_int();
            if (t > 0) {
                auto g = centralized_gains(cfg.K, t, r.alpha);
                row.G_c = g.G_c;
                row.G_p = g.G_p;
            } else {
                row.G_c = Rational(1);  // T equals the server-only delay; G_p needs t > 0
            }
        }
        row.T_no_coop = baseline_no_cooperation(cfg);
        auto ns = baseline_no_server(cfg);
        row.T_no_server = ns;
        row.no_server_infinite = !ns;
    } else if (scheme == Scheme::Decentralized) {
        auto r = decentralized_delay(cfg);
        row.T_upper = r.T;
        row.lambda = r.lambda;
        row.R1 = r.R1;
        row.R2 = r.R2;
        row.R_empty = r.R_empty;
        row.R_s = r.R_s;
        row.R_u = r.R_u;
        row.T_no_coop = r.R_s;
        if (cfg.p() > 0) {
            auto g = decentralized_gains(cfg.K, cfg.p(), cfg.alpha_max);
            row.G_c = g.G_c;
            row.G_p = g.G_p;
            row.gain_limit = g.limit;
        }
    }
    return row;
}

std::vector<Row> sweep_rows(const SweepSpec& spec) {
    std::vector<Row> rows(spec.grid.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex fail_mu;
    auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            try {
                SystemConfig c;
                c.N = spec.N;
                c.K = spec.K;
                c.alpha_max = spec.alpha_max;
                c.M = spec.grid_is_p ? spec.grid[i] * spec.N : spec.grid[i];
                c.validate();
                rows[i] = evaluate_point(spec.scheme, c);
            } catch (...) {
                std::lock_guard<std::mutex> lk(fail_mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    unsigned n = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(1, rows.size())));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

std::vector<std::string> csv_header() {
    std::vector<std::string> h = {"scheme", "N", "K", "alpha_max", "M", "M_exact", "p", "p_exact"};
    auto pair = [&](const std::string& n) {
        h.push_back(n);
        h.push_back(n + "_exact");
    };
    pair("T_upper");
    pair("T_lower");
    h.push_back("alpha");
    for (const char* n : {"lambda", "G_c", "G_p", "R1", "R2", "R_empty", "R_s", "R_u", "T_no_coop", "T_no_server",
                          "LB_half", "LB_cut", "LB_coop"})
        pair(n);
    h.push_back("gain_limit");
    return h;
}

void write_csv(std::ostream& os, const std::vector<Row>& rows) {
    auto h = csv_header();
    for (std::size_t i = 0; i < h.size(); ++i) os << (i ? "," : "") << h[i];
    os << '\n';
    for (auto& r : rows) {
        os << r.scheme << ',' << r.N << ',' << r.K << ',' << r.alpha_max << ',';
        write_opt(os, r.M);
        os << ',';
        write_opt(os, r.p);
        os << ',';
        write_opt(os, r.T_upper);
        os << ',';
        write_opt(os, r.T_lower);
        os << ',';
        if (r.alpha) os << *r.alpha;
        for (auto* v : {&r.lambda, &r.G_c, &r.G_p, &r.R1, &r.R2, &r.R_empty, &r.R_s, &r.R_u, &r.T_no_coop}) {
            os << ',';
            write_opt(os, *v);
        }
        os << ',';
        write_opt(os, r.T_no_server, r.no_server_infinite);
        for (auto* v : {&r.LB_half, &r.LB_cut, &r.LB_coop}) {
            os << ',';
            write_opt(os, *v);
        }
        os << ',' << (r.gain_limit ? 1 : 0) << '\n';
    }
}

void write_json(std::ostream& os, const std::vector<Row>& rows) {
    json arr = json::array();
    for (auto& r : rows) {
        json o = json::object();
        o["scheme"] = r.scheme;
        o["N"] = r.N;
        o["K"] = r.K;
        o["alpha_max"] = r.alpha_max;
        auto put = [&](const std::string& n, const std::optional<Rational>& v, bool inf = false) {
            o[n] = inf ? json(nullptr) : json_opt(v);
            o[n + "_exact"] = json_exact(v, inf);
        };
        put("M", r.M);
        put("p", r.p);
        put("T_upper", r.T_upper);
        put("T_lower", r.T_lower);
        o["alpha"] = r.alpha ? json(*r.alpha) : json(nullptr);
        put("lambda", r.lambda);
        put("G_c", r.G_c);
        put("G_p", r.G_p);
        put("R1", r.R1);
        put("R2", r.R2);
        put("R_empty", r.R_empty);
        put("R_s", r.R_s);
        put("R_u", r.R_u);
        put("T_no_coop", r.T_no_coop);
        put("T_no_server", r.T_no_server, r.no_server_infinite);
        put("LB_half", r.LB_half);
        put("LB_cut", r.LB_cut);
        put("LB_coop", r.LB_coop);
        o["gain_limit"] = r.gain_limit ? 1 : 0;
        arr.push_back(std::move(o));
    }
    os << arr.dump(2) << '\n';
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Settings s;
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) config_path = argv[i + 1];
        else if (a.rfind("--config=", 0) == 0) config_path = a.substr(9);
    }
    CLI::App app{"Coded caching with user cooperation: sweeps, verification and simulation"};
    app.require_subcommand(1);
    app.add_option("--config", config_path, "JSON file with default settings");
    std::string verify_grid;

    auto* sweep = app.add_subcommand("sweep", "emit delay/gain/bound curves over an M or p grid");
    add_common(sweep, s);
    sweep->add_option("--grid", s.grid, "values: start:stop:step, a comma list, or a JSON file");
    sweep->add_option("--var", s.var, "grid variable: M or p");
    sweep->add_option("--threads", s.threads, "worker threads (default: all cores)");

    auto* verify = app.add_subcommand("verify", "check gap and bound claims on a grid file");
    verify->add_option("--grid", verify_grid, "JSON grid file");
    verify->add_option("--out", s.out, "report file (default stdout)");

    auto* sim = app.add_subcommand("simulate", "run one configuration end to end");
    add_common(sim, s);
    sim->add_option("--alpha", s.alpha, "centralized: groups in parallel (default: best)");
    sim->add_option("--lambda", s.lambda, "centralized: server share (default: balanced)");
    sim->add_option("--F", s.F, "file size in bits (default: smallest valid / 10000)");
    sim->add_option("--demands", s.demands, "comma-separated file index per user");
    sim->add_option("--round", s.round, "decentralized: list the partitions of round s");
    sim->add_option("--log", s.log, "write the transmission log here");

    try {
        if (!config_path.empty()) apply_config(s, load_json(config_path));
        app.parse(argc, argv);
        if (*sweep) return run_sweep(s, out, err);
        if (*verify) return run_verify(verify_grid.empty() ? s.grid : verify_grid, s, out, err);
        if (*sim) return run_simulate(s, out);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const SchedulingError& e) {
        err << "scheduling error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace coopcli
