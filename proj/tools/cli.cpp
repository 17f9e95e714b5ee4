#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>

#include <CLI11.hpp>

#include "rotkit/rotkit.hpp"
#include "table.hpp"

namespace rotkit::cli {

namespace {

struct Options {
    std::string lambda, mu, a, b, c;
    std::string mode;
    double tol = 1e-10;
    std::int64_t max_q = 1000;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
    std::string rho;
    std::optional<std::int64_t> n;
    std::string x0;
    std::int64_t steps = 100;
    std::int64_t oracle = 0;
    std::string a_min, a_max;
    bool random = false;
};

// Raised for command-level outcomes that map onto an exit code.
struct Abort {
    int code;
    std::string message;
};

template <Scalar T>
Cell value_cell(const T& x) {
    if constexpr (is_exact_v<T>) {
        return num::format(x);
    } else {
        return x;
    }
}

template <Scalar T>
Cell fraction_cell(const Fraction& f) {
    if constexpr (is_exact_v<T>) {
        return num::format(f);
    } else {
        return static_cast<double>(f.p) / static_cast<double>(f.q);
    }
}

template <Scalar T>
QuadParams<T> read_quad(const Options& o) {
    return validate_quad<T>(num::parse<T>(o.lambda), num::parse<T>(o.mu), num::parse<T>(o.b), num::parse<T>(o.c));
}

template <Scalar T>
Params<T> read_params(const Options& o) {
    return validate_params<T>(num::parse<T>(o.lambda), num::parse<T>(o.mu), num::parse<T>(o.a),
                              num::parse<T>(o.b), num::parse<T>(o.c));
}

SolveConfig solve_config(const Options& o) {
    SolveConfig cfg;
    cfg.max_q = o.max_q;
    return cfg;
}

/// Explicit --rho wins: "p/q" is an exact rotation number, a decimal is a
/// point value. Otherwise the rotation number is solved from a and must come
/// out exact, or the enclosure must be narrower than --tol.
template <Scalar T>
RhoValue<T> resolve_rho(const Params<T>& p, const Options& o, std::ostream& err) {
    if (!o.rho.empty()) {
        if (o.rho.find('/') != std::string::npos) {
            const Rational r = num::parse_rational(o.rho);
            const Fraction f = make_fraction(numerator(r).convert_to<std::int64_t>(),
                                             denominator(r).convert_to<std::int64_t>());
            return RhoValue<T>::exact(f);
        }
        return RhoValue<T>::approx(num::parse<T>(o.rho));
    }
    const LimitClass<T> cls = classify(p, solve_config(o), o.tol);
    if (cls.kind != LimitClass<T>::Kind::irrational_candidate) {
        return RhoValue<T>::exact(cls.rho);
    }
    const Enclosure& e = *cls.enclosure;
    if (!cls.resolved) {
        throw Abort{unresolved, "rotation number unresolved: rho in (" + num::format(e.lo) + ", " +
                                    num::format(e.hi) + "); pass --rho or raise --max-q"};
    }
    const T lo = num::from_fraction<T>(e.lo);
    const T hi = num::from_fraction<T>(e.hi);
    err << "rho in (" << num::format(e.lo) << ", " << num::format(e.hi) << "), using the midpoint\n";
    return RhoValue<T>::approx(T((lo + hi) / T(2)), T((hi - lo) / T(2)));
}

// ---- validate ---------------------------------------------------------------

template <Scalar T>
int cmd_validate(const Options& o, Table& t, std::ostream& err) {
    t.columns = {"item", "value"};
    const T l = num::parse<T>(o.lambda);
    const T m = num::parse<T>(o.mu);
    const T a = num::parse<T>(o.a);
    const T b = num::parse<T>(o.b);
    const T c = num::parse<T>(o.c);
    const T one(1);
    const std::vector<std::pair<std::string, bool>> checks = {
        {"0 < lambda", l > T(0)},
        {"lambda < 1", l < one},
        {"mu > 0", m > T(0)},
        {"0 <= c", c >= T(0)},
        {"c < b", c < b},
        {"b <= 1", b <= one},
        {"lambda*mu <= 1 or mu*(1-b) <= 1-c", l * m <= one || m * (one - b) <= one - c},
        {"b - b*lambda < a", b - b * l < a},
        {"a < b - c*lambda", a < b - c * l},
        {"(1-lambda)(c - mu*b) < (1-mu)*a", (one - l) * (c - m * b) < (one - m) * a},
    };
    for (const auto& [name, holds] : checks) {
        t.add({name, holds});
    }
    try {
        const Params<T> p = validate_params<T>(l, m, a, b, c);
        t.add({"valid", true});
        t.add({"eta", value_cell(p.eta())});
        t.add({"d_bound", value_cell(p.d_bound())});
        t.add({"lambda*mu < 1", p.quad().contracting_product()});
        return ok;
    } catch (const DomainError& e) {
        t.add({"valid", false});
        err << "invalid parameters: " << e.inequality() << " violated\n";
        return invalid_params;
    }
}

// ---- rho --------------------------------------------------------------------

template <Scalar T>
int cmd_rho(const Options& o, Table& t, std::ostream& err) {
    const Params<T> p = read_params<T>(o);
    const RhoSolveResult<T> res = rho_of_a(p, solve_config(o));
    t.columns = {"kind", "p", "q", "rho_lo", "rho_hi", "a_lo", "a_hi", "right_endpoint"};
    double analytic = 0.0;
    double width = 0.0;
    std::vector<Cell> row;
    if (res.is_exact()) {
        const Plateau<T>& pl = res.plateau();
        const Fraction f = res.rho.fraction();
        row = {std::string("exact"), f.p, f.q, fraction_cell<T>(f), fraction_cell<T>(f),
               value_cell(pl.a_lo), value_cell(pl.a_hi), res.right_endpoint};
        analytic = static_cast<double>(f.p) / static_cast<double>(f.q);
        err << "rho = " << num::format(f) << ", plateau [" << num::format(pl.a_lo) << ", "
            << num::format(pl.a_hi) << "]" << (res.right_endpoint ? ", a at right end" : "") << "\n";
    } else {
        const Enclosure& e = res.enclosure();
        row = {std::string("enclosure"), std::monostate{}, std::monostate{}, fraction_cell<T>(e.lo),
               fraction_cell<T>(e.hi), std::monostate{}, std::monostate{}, false};
        analytic = num::to_double(res.rho.point());
        width = e.width();
        err << "rho in (" << num::format(e.lo) << ", " << num::format(e.hi) << "), width " << width << "\n";
    }
    if (o.oracle > 0) {
        // The orbit estimate always runs in double: exact iterates grow
        // without bound in size.
        const Params<double> pd =
            validate_params<double>(num::to_double(p.lambda()), num::to_double(p.mu()), num::to_double(p.a()),
                                    num::to_double(p.b()), num::to_double(p.c()));
        const double est = rotation_estimate(pd, pd.c(), o.oracle);
        t.columns.insert(t.columns.end(), {"oracle", "discrepancy"});
        row.push_back(est);
        row.push_back(std::abs(analytic - est));
        err << "oracle (N = " << o.oracle << "): " << num::format(est) << ", discrepancy "
            << std::abs(analytic - est) << " (bound " << 1.0 / static_cast<double>(o.oracle) + width << ")\n";
    }
    t.add(std::move(row));
    return ok;
}

// ---- staircase --------------------------------------------------------------

template <Scalar T>
int cmd_staircase(const Options& o, Table& t, std::ostream& err) {
    const QuadParams<T> q = read_quad<T>(o);
    const T lo = o.a_min.empty() ? T(q.b() - q.b() * q.lambda()) : num::parse<T>(o.a_min);
    const T hi = o.a_max.empty() ? d_bound(q) : num::parse<T>(o.a_max);
    if (o.steps < 1) {
        throw DomainError(DomainError::Kind::argument, "steps >= 1");
    }
    t.columns = {"a", "kind", "p", "q", "rho_lo", "rho_hi"};
    const SolveConfig cfg = solve_config(o);
    std::int64_t omitted = 0;
    for (std::int64_t k = 0; k <= o.steps; ++k) {
        const T a = lo + (hi - lo) * num::from_ratio<T>(k, o.steps);
        std::optional<Params<T>> p;
        try {
            p = validate_params<T>(q.lambda(), q.mu(), a, q.b(), q.c());
        } catch (const DomainError&) {
            ++omitted;
            continue;
        }
        const RhoSolveResult<T> res = rho_of_a(*p, cfg);
        if (res.is_exact()) {
            const Fraction f = res.rho.fraction();
            t.add({value_cell(a), std::string("exact"), f.p, f.q, fraction_cell<T>(f), fraction_cell<T>(f)});
        } else {
            const Enclosure& e = res.enclosure();
            t.add({value_cell(a), std::string("enclosure"), std::monostate{}, std::monostate{},
                   fraction_cell<T>(e.lo), fraction_cell<T>(e.hi)});
        }
    }
    if (omitted > 0) {
        err << "warning: " << omitted << " grid point(s) outside the open a-interval omitted\n";
    }
    return ok;
}

// ---- cycle ------------------------------------------------------------------

template <Scalar T>
int cmd_cycle(const Options& o, Table& t, std::ostream& err) {
    const Params<T> p = read_params<T>(o);
    Fraction f{};
    if (!o.rho.empty()) {
        const RhoValue<T> r = resolve_rho(p, o, err);
        if (!r.is_exact()) {
            throw DomainError(DomainError::Kind::argument, "--rho given as p/q for cycle");
        }
        f = r.fraction();
    } else {
        const LimitClass<T> cls = classify(p, solve_config(o), o.tol);
        using Kind = typename LimitClass<T>::Kind;
        if (cls.kind == Kind::irrational_candidate) {
            const Enclosure& e = *cls.enclosure;
            throw Abort{unresolved, "no cycle with period <= " + std::to_string(o.max_q) + ": rho in (" +
                                        num::format(e.lo) + ", " + num::format(e.hi) + ")"};
        }
        if (cls.kind == Kind::plateau_right_endpoint) {
            throw Abort{unresolved, "a is the right end of the " + num::format(cls.rho) +
                                        " plateau; the limit set is empty"};
        }
        f = cls.rho;
    }
    const Cycle<T> cyc = limit_cycle(p, f, std::max(o.tol, 1e-9));
    t.columns = {"m", "point"};
    for (std::size_t m = 0; m < cyc.points.size(); ++m) {
        t.add({static_cast<std::int64_t>(m), value_cell(cyc.points[m])});
    }
    err << "period " << cyc.period << ", winding " << cyc.winding << "\n";
    return ok;
}

// ---- phi --------------------------------------------------------------------

template <Scalar T>
int cmd_phi(const Options& o, Table& t, std::ostream& err) {
    const Params<T> p = read_params<T>(o);
    const RhoValue<T> rho = resolve_rho(p, o, err);
    const std::int64_t n = o.n.value_or(512);
    if (n < 1) {
        throw DomainError(DomainError::Kind::argument, "n >= 1");
    }
    t.columns = {"y", "phi"};
    for (std::int64_t k = 0; k < n; ++k) {
        const T y = num::from_ratio<T>(k, n);
        const T v = rho.is_exact() ? phi_at(p, rho.fraction(), num::ratio(k, n)) : phi_eval(p, rho, y, o.tol);
        t.add({value_cell(y), value_cell(v)});
    }
    // Last row: the left limit at 1.
    const T right = rho.is_exact() ? phi_left_limit_at(p, rho.fraction(), Rational(1))
                                   : phi_left_limit(p, rho, T(1), o.tol);
    t.add({value_cell(T(1)), value_cell(right)});
    return ok;
}

// ---- cantor -----------------------------------------------------------------

template <Scalar T>
int cmd_cantor(const Options& o, Table& t, std::ostream& err) {
    const Params<T> p = read_params<T>(o);
    const RhoValue<T> rho = resolve_rho(p, o, err);
    const std::int64_t n = o.n.value_or(256);
    if (n < 2) {
        throw DomainError(DomainError::Kind::argument, "n >= 2");
    }
    std::vector<T> ys, vs;
    T right{};
    if (o.random) {
        std::mt19937_64 gen(o.seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<double> u(static_cast<std::size_t>(n));
        for (double& x : u) x = unif(gen);
        std::sort(u.begin(), u.end());
        for (double x : u) {
            const T y = [&] {
                if constexpr (is_exact_v<T>) {
                    return num::to_rational(x);
                } else {
                    return x;
                }
            }();
            ys.push_back(y);
            if (rho.is_exact()) {
                vs.push_back(phi_at(p, rho.fraction(), num::to_rational(y)));
            } else {
                vs.push_back(phi_eval(p, rho, y, o.tol));
            }
        }
        right = rho.is_exact() ? phi_left_limit_at(p, rho.fraction(), Rational(1))
                               : phi_left_limit(p, rho, T(1), o.tol);
    } else {
        CantorSample<T> s = cantor_sample(p, rho, n, o.tol);
        ys = std::move(s.inputs);
        vs = std::move(s.values);
        right = s.right_end;
    }
    t.columns = {"y", "phi", "gap"};
    T min_gap{}, max_gap{}, sum{};
    std::int64_t flat = 0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i == 0) {
            t.add({value_cell(ys[i]), value_cell(vs[i]), std::monostate{}});
            continue;
        }
        const T gap = vs[i] - vs[i - 1];
        if (i == 1 || gap < min_gap) min_gap = gap;
        if (i == 1 || gap > max_gap) max_gap = gap;
        if (num::to_double(gap) <= 10.0 * o.tol) ++flat;
        sum += gap;
        t.add({value_cell(ys[i]), value_cell(vs[i]), value_cell(gap)});
    }
    err << "phi(0) = " << num::format(vs.front()) << ", phi(1-) = " << num::format(right) << "\n"
        << "gaps: min " << num::format(min_gap) << ", max " << num::format(max_gap) << ", mean "
        << num::to_double(sum) / static_cast<double>(vs.size() - 1) << ", flat " << flat << "\n";
    return ok;
}

// ---- orbit ------------------------------------------------------------------

template <Scalar T>
int cmd_orbit(const Options& o, Table& t, std::ostream&) {
    const Params<T> p = read_params<T>(o);
    const T x0 = o.x0.empty() ? p.c() : num::parse<T>(o.x0);
    const OrbitSample<T> s = orbit(p, x0, o.n.value_or(100));
    t.columns = {"k", "lift", "wrap"};
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        t.add({static_cast<std::int64_t>(k), value_cell(s.values[k]), s.wraps[k]});
    }
    return ok;
}

using Command = int (*)(const Options&, Table&, std::ostream&);

struct CommandPair {
    Command float_mode;
    Command exact_mode;
};

#define ROTKIT_COMMAND(name) CommandPair{&name<double>, &name<Rational>}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Rotation numbers, plateaus and semi-conjugacies of two-branch piecewise affine circle maps",
                 "rotkit"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        CommandPair fn;
        bool needs_a;
    };
    const Sub subs[] = {
        {"validate", "check the parameter inequalities", ROTKIT_COMMAND(cmd_validate), true},
        {"rho", "rotation number by Stern-Brocot search over plateaus", ROTKIT_COMMAND(cmd_rho), true},
        {"staircase", "rotation number over a uniform a-grid", ROTKIT_COMMAND(cmd_staircase), false},
        {"cycle", "attracting periodic orbit for rational rotation number", ROTKIT_COMMAND(cmd_cycle), true},
        {"phi", "semi-conjugacy phi on a uniform grid", ROTKIT_COMMAND(cmd_phi), true},
        {"cantor", "phi sample with gap statistics", ROTKIT_COMMAND(cmd_cantor), true},
        {"orbit", "lift iterates and wrap counts", ROTKIT_COMMAND(cmd_orbit), true},
    };

    std::vector<std::pair<CLI::App*, CommandPair>> registered;
    for (const Sub& s : subs) {
        CLI::App* sc = app.add_subcommand(s.name, s.help);
        sc->add_option("--lambda", o.lambda, "slope of the left branch, in (0,1)")->required();
        sc->add_option("--mu", o.mu, "slope ratio of the right branch, > 0")->required();
        sc->add_option("--b", o.b, "right end of the image interval")->required();
        sc->add_option("--c", o.c, "left end of the image interval")->required();
        if (s.needs_a) {
            sc->add_option("--a", o.a, "value f(0)")->required();
        }
        sc->add_option("--mode", o.mode, "float or exact (default: $ROTKIT_MODE, else float)")
            ->check(CLI::IsMember({"float", "exact"}));
        sc->add_option("--tol", o.tol, "series tolerance")->check(CLI::PositiveNumber);
        sc->add_option("--max-q", o.max_q, "largest denominator tried by the rotation number search")
            ->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 40));
        sc->add_option("--out", o.out, "write data to this file instead of stdout");
        sc->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        const std::string name = s.name;
        if (name == "rho") {
            sc->add_option("--oracle", o.oracle, "append the orbit estimate after N iterations")
                ->check(CLI::NonNegativeNumber);
        }
        if (name == "staircase") {
            sc->add_option("--steps", o.steps, "number of grid intervals");
            sc->add_option("--a-min", o.a_min, "first grid point (default: left end of the a-interval)");
            sc->add_option("--a-max", o.a_max, "last grid point (default: right end of the a-interval)");
        }
        if (name == "cycle" || name == "phi" || name == "cantor") {
            sc->add_option("--rho", o.rho, "rotation number: p/q (exact) or a decimal (point value)");
        }
        if (name == "phi" || name == "cantor" || name == "orbit") {
            sc->add_option("--n", o.n, "grid size (phi, cantor) or iteration count (orbit)");
        }
        if (name == "cantor") {
            sc->add_flag("--random", o.random, "sample y uniformly at random instead of on a grid");
            sc->add_option("--seed", o.seed, "seed for --random");
        }
        if (name == "orbit") {
            sc->add_option("--x0", o.x0, "starting point (default: c)");
        }
        registered.emplace_back(sc, s.fn);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : invalid_params;
    }

    if (o.mode.empty()) {
        const char* env = std::getenv("ROTKIT_MODE");
        o.mode = env && *env ? env : "float";
        if (o.mode != "float" && o.mode != "exact") {
            err << "ROTKIT_MODE must be float or exact, got '" << o.mode << "'\n";
            return invalid_params;
        }
    }

    CommandPair fn{};
    for (const auto& [sc, pair] : registered) {
        if (sc->parsed()) fn = pair;
    }

    Table table;
    int code = ok;
    try {
        code = (o.mode == "exact" ? fn.exact_mode : fn.float_mode)(o, table, err);
    } catch (const Abort& a) {
        err << a.message << "\n";
        return a.code;
    } catch (const DomainError& e) {
        err << "invalid parameters: " << e.inequality() << " violated\n";
        return invalid_params;
    } catch (const ConvergenceError& e) {
        err << "convergence failure: " << e.what() << "\n";
        return convergence_failure;
    } catch (const ValidationError& e) {
        err << "validation failure: " << e.what() << "\n";
        return convergence_failure;
    } catch (const IterationLimit& e) {
        err << "iteration limit: " << e.what() << "\n";
        return convergence_failure;
    }

    const Format fmt = o.format == "json" ? Format::json : Format::csv;
    if (o.out.empty()) {
        table.write(out, fmt);
    } else {
        std::ofstream file(o.out);
        if (!file) {
            err << "cannot open " << o.out << " for writing\n";
            return invalid_params;
        }
        table.write(file, fmt);
    }
    return code;
}

} // namespace rotkit::cli
