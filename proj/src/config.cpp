#include "orlicz/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace orlicz {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

struct KeyValue {
    std::string section, key, value;
    int line;
};

std::vector<Point> probe_points(const Config& cfg) {
    // corners plus center of the domain box
    std::vector<Point> pts;
    const int corners = 1 << cfg.axes;
    for (int c = 0; c < corners; ++c) {
        Point p;
        p.dim = cfg.axes;
        for (int a = 0; a < cfg.axes; ++a)
            p[a] = ((c >> a) & 1) ? cfg.hi[static_cast<std::size_t>(a)]
                                  : cfg.lo[static_cast<std::size_t>(a)];
        pts.push_back(p);
    }
    Point mid;
    mid.dim = cfg.axes;
    for (int a = 0; a < cfg.axes; ++a)
        mid[a] = 0.5 * (cfg.lo[static_cast<std::size_t>(a)] + cfg.hi[static_cast<std::size_t>(a)]);
    pts.push_back(mid);
    return pts;
}

int index_suffix(const std::string& key, const std::string& stem) {
    // "p1" with stem "p" -> 0; returns -1 when not of this shape
    if (key.size() != stem.size() + 1 || key.compare(0, stem.size(), stem) != 0) return -1;
    const char c = key.back();
    if (c < '1' || c > static_cast<char>('0' + kMaxDim)) return -1;
    return c - '1';
}

Expression parse_expr(const KeyValue& kv) {
    try {
        return Expression::parse(kv.value);
    } catch (const ParseError& e) {
        throw ParseError(std::string(e.what()) + " (in value of '" + kv.key + "', config line " +
                             std::to_string(kv.line) + ")",
                         e.line, e.col);
    }
}

ComparisonCfg parse_comparison(const KeyValue& kv) {
    ComparisonCfg out;
    out.present = true;
    std::istringstream ss(kv.value);
    ss >> out.kind;
    if (out.kind != "power" && out.kind != "power-log")
        throw SemanticError("comparison '" + kv.key + "' kind must be power or power-log (line " +
                            std::to_string(kv.line) + ")");
    std::string rest;
    std::getline(ss, rest);
    rest = trim(rest);
    if (rest.empty())
        throw SemanticError("comparison '" + kv.key + "' needs an exponent expression (line " +
                            std::to_string(kv.line) + ")");
    KeyValue sub{kv.section, kv.key, rest, kv.line};
    out.p = parse_expr(sub);
    return out;
}

}  // namespace

Config parse_config(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    std::string section;
    std::vector<KeyValue> kvs;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            if (t != "orlicz-var v1")
                throw ParseError("first line must be the version header 'orlicz-var v1'", lineno,
                                 1);
            header_seen = true;
            continue;
        }
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ParseError("malformed section header '" + t + "'", lineno, 1);
            section = t.substr(1, t.size() - 2);
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value' in '" + t + "'", lineno, 1);
        kvs.push_back({section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)), lineno});
    }
    if (!header_seen) throw ParseError("empty config: missing 'orlicz-var v1' header", 1, 1);

    Config cfg;
    cfg.resolution = {17, 17, 9, 9};
    cfg.lo = {0.0, 0.0, 0.0, 0.0};
    cfg.hi = {1.0, 1.0, 1.0, 1.0};
    std::array<bool, kMaxDim> kind_seen{};
    std::array<FamilyComponentCfg, kMaxDim> comps;
    std::array<Expression, kMaxDim> flux_a, flux_A;

    for (const auto& kv : kvs) {
        if (kv.section == "domain") {
            if (kv.key == "axes") {
                cfg.axes = std::stoi(kv.value);
                if (cfg.axes < 2 || cfg.axes > kMaxDim)
                    throw SemanticError("axes must be between 2 and " + std::to_string(kMaxDim) +
                                        " (line " + std::to_string(kv.line) + ")");
            } else if (int i = index_suffix(kv.key, "interval"); i >= 0) {
                std::istringstream ss(kv.value);
                if (!(ss >> cfg.lo[static_cast<std::size_t>(i)] >>
                      cfg.hi[static_cast<std::size_t>(i)]))
                    throw SemanticError("interval needs two numbers (line " +
                                        std::to_string(kv.line) + ")");
            } else if (kv.key == "resolution") {
                std::istringstream ss(kv.value);
                int v, i = 0;
                while (ss >> v) {
                    if (i >= kMaxDim) break;
                    cfg.resolution[static_cast<std::size_t>(i++)] = v;
                }
            } else {
                throw SemanticError("unknown [domain] key '" + kv.key + "' (line " +
                                    std::to_string(kv.line) + ")");
            }
        } else if (kv.section == "family") {
            if (int i = index_suffix(kv.key, "kind"); i >= 0) {
                comps[static_cast<std::size_t>(i)].kind = kv.value;
                kind_seen[static_cast<std::size_t>(i)] = true;
            } else if (int j = index_suffix(kv.key, "p"); j >= 0) {
                comps[static_cast<std::size_t>(j)].p = parse_expr(kv);
            } else {
                throw SemanticError("unknown [family] key '" + kv.key + "' (line " +
                                    std::to_string(kv.line) + ")");
            }
        } else if (kv.section == "flux") {
            if (kv.key == "model") {
                cfg.flux_model = kv.value;
                if (kv.value != "power" && kv.value != "custom")
                    throw SemanticError("flux model must be power or custom (line " +
                                        std::to_string(kv.line) + ")");
            } else if (int i = index_suffix(kv.key, "a"); i >= 0) {
                flux_a[static_cast<std::size_t>(i)] = parse_expr(kv);
            } else if (int j = index_suffix(kv.key, "A"); j >= 0) {
                flux_A[static_cast<std::size_t>(j)] = parse_expr(kv);
            } else {
                throw SemanticError("unknown [flux] key '" + kv.key + "' (line " +
                                    std::to_string(kv.line) + ")");
            }
        } else if (kv.section == "data") {
            if (kv.key == "b") cfg.b_expr = parse_expr(kv);
            else if (kv.key == "b0") cfg.b0 = std::stod(kv.value);
            else if (kv.key == "f") cfg.f_expr = parse_expr(kv);
            else if (kv.key == "F") cfg.F_expr = parse_expr(kv);
            else if (kv.key == "g") cfg.g_expr = parse_expr(kv);
            else if (kv.key == "G") cfg.G_expr = parse_expr(kv);
            else if (kv.key == "k1") cfg.k1 = std::stod(kv.value);
            else if (kv.key == "k2") cfg.k2 = std::stod(kv.value);
            else if (kv.key == "u_star") cfg.u_star = parse_expr(kv);
            else
                throw SemanticError("unknown [data] key '" + kv.key + "' (line " +
                                    std::to_string(kv.line) + ")");
        } else if (kv.section == "comparisons") {
            if (int i = index_suffix(kv.key, "P"); i >= 0)
                cfg.P[static_cast<std::size_t>(i)] = parse_comparison(kv);
            else if (kv.key == "R") cfg.R = parse_comparison(kv);
            else if (kv.key == "M") cfg.M = parse_comparison(kv);
            else if (kv.key == "H") cfg.H = parse_comparison(kv);
            else if (kv.key == "D") cfg.D_expr = parse_expr(kv);
            else if (int j = index_suffix(kv.key, "d"); j >= 0)
                cfg.d_expr[static_cast<std::size_t>(j)] = parse_expr(kv);
            else if (int k = index_suffix(kv.key, "c"); k >= 0)
                cfg.c_const[static_cast<std::size_t>(k)] = std::stod(kv.value);
            else
                throw SemanticError("unknown [comparisons] key '" + kv.key + "' (line " +
                                    std::to_string(kv.line) + ")");
        } else if (kv.section == "solver") {
            if (kv.key == "grad_tol") cfg.grad_tol = std::stod(kv.value);
            else if (kv.key == "max_iters") cfg.max_iters = std::stoi(kv.value);
            else if (kv.key == "armijo_c") cfg.armijo_c = std::stod(kv.value);
            else if (kv.key == "backtrack") cfg.backtrack = std::stod(kv.value);
            else if (kv.key == "memory") cfg.memory = std::stoi(kv.value);
            else if (kv.key == "seed") cfg.seed = std::stoull(kv.value);
            else if (kv.key == "mode") cfg.mode = kv.value;
            else if (kv.key == "trials") cfg.trials = std::stoi(kv.value);
            else
                throw SemanticError("unknown [solver] key '" + kv.key + "' (line " +
                                    std::to_string(kv.line) + ")");
        } else if (kv.section == "output") {
            if (kv.key == "dir") cfg.out_dir = kv.value;
            else
                throw SemanticError("unknown [output] key '" + kv.key + "' (line " +
                                    std::to_string(kv.line) + ")");
        } else {
            throw SemanticError("unknown section [" + kv.section + "] (line " +
                                std::to_string(kv.line) + ")");
        }
    }

    for (int a = 0; a < cfg.axes; ++a) {
        const auto ai = static_cast<std::size_t>(a);
        if (cfg.resolution[ai] < 3)
            throw SemanticError("resolution must be at least 3 nodes per axis");
        if (!(cfg.hi[ai] > cfg.lo[ai])) throw SemanticError("empty interval on axis " +
                                                             std::to_string(a + 1));
        if (!kind_seen[ai] && comps[ai].p.empty())
            throw SemanticError("family component " + std::to_string(a + 1) + " not specified");
        if (comps[ai].kind != "power" && comps[ai].kind != "power-log" &&
            comps[ai].kind != "tabulated")
            throw SemanticError("family kind must be power, power-log or tabulated");
        if (comps[ai].p.empty())
            throw SemanticError("family component " + std::to_string(a + 1) +
                                " needs an exponent expression");
        cfg.family.push_back(comps[ai]);
    }
    if (cfg.flux_model == "custom") {
        for (int a = 0; a < cfg.axes; ++a) {
            const auto ai = static_cast<std::size_t>(a);
            if (flux_a[ai].empty())
                throw SemanticError("custom flux needs a" + std::to_string(a + 1));
            cfg.flux_a.push_back(flux_a[ai]);
            cfg.flux_A.push_back(flux_A[ai]);  // may be empty: numeric fallback
        }
    }
    if (cfg.mode != "standard" && cfg.mode != "manufactured")
        throw SemanticError("mode must be standard or manufactured");
    if (cfg.f_expr.empty()) cfg.f_expr = Expression::parse("0");
    if (cfg.g_expr.empty()) cfg.g_expr = Expression::parse("0");
    if (cfg.b_expr.empty()) cfg.b_expr = Expression::parse("1");

    // totality and N-function requirements at the probe points
    const auto pts = probe_points(cfg);
    for (int a = 0; a < cfg.axes; ++a) {
        const auto& comp = cfg.family[static_cast<std::size_t>(a)];
        for (const auto& x : pts) {
            double pv;
            try {
                pv = comp.p.eval(x, 1.0);
            } catch (const EvalError& e) {
                throw SemanticError("family exponent p" + std::to_string(a + 1) +
                                    " not evaluable on the domain: " + e.what());
            }
            if (!(pv > 1.0))
                throw SemanticError("family exponent p" + std::to_string(a + 1) + " evaluates to " +
                                    format_double(pv) + " <= 1 at a domain corner");
        }
    }
    for (const auto& x : pts) {
        try {
            (void)cfg.b_expr.eval(x, 0.0);
            (void)cfg.f_expr.eval(x, 1.0);
            (void)cfg.g_expr.eval(x, 1.0);
        } catch (const EvalError& e) {
            throw SemanticError(std::string("data expression not evaluable on the domain: ") +
                                e.what());
        }
    }
    return cfg;
}

Config parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const Config& cfg) {
    std::ostringstream os;
    os << "orlicz-var v1\n\n[domain]\naxes = " << cfg.axes << "\n";
    for (int a = 0; a < cfg.axes; ++a)
        os << "interval" << a + 1 << " = " << format_double(cfg.lo[static_cast<std::size_t>(a)])
           << " " << format_double(cfg.hi[static_cast<std::size_t>(a)]) << "\n";
    os << "resolution =";
    for (int a = 0; a < cfg.axes; ++a) os << " " << cfg.resolution[static_cast<std::size_t>(a)];
    os << "\n\n[family]\n";
    for (int a = 0; a < cfg.axes; ++a) {
        const auto& comp = cfg.family[static_cast<std::size_t>(a)];
        os << "kind" << a + 1 << " = " << comp.kind << "\n";
        os << "p" << a + 1 << " = " << comp.p.str() << "\n";
    }
    os << "\n[flux]\nmodel = " << cfg.flux_model << "\n";
    for (std::size_t i = 0; i < cfg.flux_a.size(); ++i) {
        os << "a" << i + 1 << " = " << cfg.flux_a[i].str() << "\n";
        if (!cfg.flux_A[i].empty()) os << "A" << i + 1 << " = " << cfg.flux_A[i].str() << "\n";
    }
    os << "\n[data]\n";
    os << "b = " << cfg.b_expr.str() << "\n";
    os << "b0 = " << format_double(cfg.b0) << "\n";
    os << "f = " << cfg.f_expr.str() << "\n";
    if (!cfg.F_expr.empty()) os << "F = " << cfg.F_expr.str() << "\n";
    os << "g = " << cfg.g_expr.str() << "\n";
    if (!cfg.G_expr.empty()) os << "G = " << cfg.G_expr.str() << "\n";
    os << "k1 = " << format_double(cfg.k1) << "\n";
    os << "k2 = " << format_double(cfg.k2) << "\n";
    if (!cfg.u_star.empty()) os << "u_star = " << cfg.u_star.str() << "\n";
    os << "\n[comparisons]\n";
    for (int a = 0; a < cfg.axes; ++a) {
        const auto& P = cfg.P[static_cast<std::size_t>(a)];
        if (P.present) os << "P" << a + 1 << " = " << P.kind << " " << P.p.str() << "\n";
        if (!cfg.d_expr[static_cast<std::size_t>(a)].empty())
            os << "d" << a + 1 << " = " << cfg.d_expr[static_cast<std::size_t>(a)].str() << "\n";
        if (cfg.c_const[static_cast<std::size_t>(a)] != 1.0)
            os << "c" << a + 1 << " = " << format_double(cfg.c_const[static_cast<std::size_t>(a)])
               << "\n";
    }
    if (cfg.R.present) os << "R = " << cfg.R.kind << " " << cfg.R.p.str() << "\n";
    if (!cfg.D_expr.empty()) os << "D = " << cfg.D_expr.str() << "\n";
    if (cfg.M.present) os << "M = " << cfg.M.kind << " " << cfg.M.p.str() << "\n";
    if (cfg.H.present) os << "H = " << cfg.H.kind << " " << cfg.H.p.str() << "\n";
    os << "\n[solver]\n";
    os << "grad_tol = " << format_double(cfg.grad_tol) << "\n";
    os << "max_iters = " << cfg.max_iters << "\n";
    os << "armijo_c = " << format_double(cfg.armijo_c) << "\n";
    os << "backtrack = " << format_double(cfg.backtrack) << "\n";
    os << "memory = " << cfg.memory << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "mode = " << cfg.mode << "\n";
    os << "trials = " << cfg.trials << "\n";
    os << "\n[output]\ndir = " << cfg.out_dir << "\n";
    return os.str();
}

bool equivalent(const Config& a, const Config& b) {
    auto expr_eq = [](const Expression& x, const Expression& y) { return x.str() == y.str(); };
    if (a.axes != b.axes || a.flux_model != b.flux_model || a.b0 != b.b0 || a.k1 != b.k1 ||
        a.k2 != b.k2 || a.grad_tol != b.grad_tol || a.max_iters != b.max_iters ||
        a.armijo_c != b.armijo_c || a.backtrack != b.backtrack || a.memory != b.memory ||
        a.seed != b.seed || a.mode != b.mode || a.trials != b.trials || a.out_dir != b.out_dir)
        return false;
    for (int i = 0; i < a.axes; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        if (a.lo[ii] != b.lo[ii] || a.hi[ii] != b.hi[ii] || a.resolution[ii] != b.resolution[ii])
            return false;
        if (a.family[ii].kind != b.family[ii].kind || !expr_eq(a.family[ii].p, b.family[ii].p))
            return false;
        if (a.P[ii].present != b.P[ii].present ||
            (a.P[ii].present &&
             (a.P[ii].kind != b.P[ii].kind || !expr_eq(a.P[ii].p, b.P[ii].p))))
            return false;
        if (!expr_eq(a.d_expr[ii], b.d_expr[ii]) || a.c_const[ii] != b.c_const[ii]) return false;
    }
    if (a.flux_a.size() != b.flux_a.size()) return false;
    for (std::size_t i = 0; i < a.flux_a.size(); ++i)
        if (!expr_eq(a.flux_a[i], b.flux_a[i]) || !expr_eq(a.flux_A[i], b.flux_A[i])) return false;
    auto cmp_eq = [&](const ComparisonCfg& x, const ComparisonCfg& y) {
        return x.present == y.present && (!x.present || (x.kind == y.kind && expr_eq(x.p, y.p)));
    };
    return expr_eq(a.b_expr, b.b_expr) && expr_eq(a.f_expr, b.f_expr) &&
           expr_eq(a.F_expr, b.F_expr) && expr_eq(a.g_expr, b.g_expr) &&
           expr_eq(a.G_expr, b.G_expr) && expr_eq(a.u_star, b.u_star) && cmp_eq(a.R, b.R) &&
           cmp_eq(a.M, b.M) && cmp_eq(a.H, b.H) && expr_eq(a.D_expr, b.D_expr);
}

Grid build_grid(const Config& cfg) {
    return Grid(cfg.axes, cfg.lo, cfg.hi, cfg.resolution);
}

MOFunction build_component(const Config& cfg, const FamilyComponentCfg& comp) {
    const Expression p = comp.p;
    if (comp.kind == "power") {
        return make_power([p](const Point& x) { return p.eval(x, 0.0); });
    }
    if (comp.kind == "power-log") {
        return make_power_log([p](const Point& x) { return p.eval(x, 0.0); }, 1.0);
    }
    // tabulated: sample the exponent expression on the configured lattice
    std::array<int, kMaxDim> nodes = cfg.resolution;
    std::size_t count = 1;
    for (int a = 0; a < cfg.axes; ++a) count *= static_cast<std::size_t>(nodes[static_cast<std::size_t>(a)]);
    const Grid g = build_grid(cfg);
    std::vector<double> values(count);
    for (std::size_t k = 0; k < count; ++k) values[k] = p.eval(g.node(k), 0.0);
    return make_tabulated_power(cfg.axes, cfg.lo, cfg.hi, nodes, std::move(values));
}

MOFunction build_comparison(const Config& cfg, const ComparisonCfg& cmp) {
    const Expression p = cmp.p;
    (void)cfg;
    if (cmp.kind == "power-log")
        return make_power_log([p](const Point& x) { return p.eval(x, 0.0); }, 1.0);
    return make_power([p](const Point& x) { return p.eval(x, 0.0); });
}

AnisotropicFamily build_family(const Config& cfg) {
    std::vector<MOFunction> comps;
    for (const auto& c : cfg.family) comps.push_back(build_component(cfg, c));
    return AnisotropicFamily(std::move(comps));
}

ProblemSpec build_problem(const Config& cfg) {
    ProblemSpec spec(build_grid(cfg), build_family(cfg));

    for (int a = 0; a < cfg.axes; ++a) {
        const auto ai = static_cast<std::size_t>(a);
        if (cfg.flux_model == "power") {
            const Expression p = cfg.family[ai].p;
            spec.fluxes.push_back(
                model_power_flux([p](const Point& x) { return p.eval(x, 0.0); }));
        } else {
            const Expression ae = cfg.flux_a[ai];
            Flux fl;
            fl.a = [ae](const Point& x, double s) { return ae.eval(x, s); };
            if (!cfg.flux_A[ai].empty()) {
                const Expression Ae = cfg.flux_A[ai];
                fl.antiderivative = [Ae](const Point& x, double s) { return Ae.eval(x, s); };
            }
            spec.fluxes.push_back(fl);
        }
    }

    const Expression be = cfg.b_expr;
    for (std::size_t k = 0; k < spec.grid.size(); ++k)
        spec.b[k] = be.eval(spec.grid.node(k), 0.0);
    spec.b0 = cfg.b0;

    const Expression fe = cfg.f_expr;
    spec.f = [fe](const Point& x, double s) { return fe.eval(x, s); };
    if (!cfg.F_expr.empty()) {
        const Expression Fe = cfg.F_expr;
        spec.F = [Fe](const Point& x, double s) { return Fe.eval(x, s); };
    }
    const Expression ge = cfg.g_expr;
    spec.g = [ge](const Point& x, double s) { return ge.eval(x, s); };
    if (!cfg.G_expr.empty()) {
        const Expression Ge = cfg.G_expr;
        spec.G = [Ge](const Point& x, double s) { return Ge.eval(x, s); };
    }
    spec.k1 = cfg.k1;
    spec.k2 = cfg.k2;
    spec.manufactured_mode = cfg.mode == "manufactured";

    for (int a = 0; a < cfg.axes; ++a) {
        const auto ai = static_cast<std::size_t>(a);
        if (cfg.P[ai].present) spec.cmp.P.push_back(build_comparison(cfg, cfg.P[ai]));
        spec.cmp.c.push_back(cfg.c_const[ai]);
        if (!cfg.d_expr[ai].empty()) {
            const Expression de = cfg.d_expr[ai];
            spec.cmp.d.push_back([de](const Point& x) { return de.eval(x, 0.0); });
        } else {
            spec.cmp.d.push_back([](const Point&) { return 0.0; });
        }
    }
    if (cfg.R.present) spec.cmp.R = build_comparison(cfg, cfg.R);
    if (!cfg.D_expr.empty()) {
        const Expression De = cfg.D_expr;
        spec.cmp.D_bound = [De](const Point& x) { return De.eval(x, 0.0); };
    }
    if (cfg.M.present) spec.cmp.M = build_comparison(cfg, cfg.M);
    if (cfg.H.present) spec.cmp.H = build_comparison(cfg, cfg.H);
    return spec;
}

}  // namespace orlicz
