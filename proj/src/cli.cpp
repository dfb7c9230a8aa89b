#include "mcstat/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "mcstat/sampling.hpp"

namespace mcstat {

namespace {

struct GlobalOpts {
    std::string format = "both";  // exact | decimal | both
    int digits = 12;
    std::string cache_path;
    int cap = 8;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string scalar_text(const ExactScalar& v, const GlobalOpts& g) {
    std::string exact = v.to_string();
    std::string dec = v.is_rational() ? decimal_string(v.rational_value(), g.digits)
                                      : v.eval_numeric(g.digits).to_string(g.digits);
    if (g.format == "exact") return exact;
    if (g.format == "decimal") return dec;
    return exact + " = " + dec;
}

std::string rational_text(const Rational& v, const GlobalOpts& g) {
    return scalar_text(ExactScalar(v), g);
}

BoxCone parse_boxes(int k, const std::vector<std::string>& specs) {
    BoxCone box(k);
    for (const auto& spec : specs) {
        auto eq = spec.find('=');
        auto colon = spec.find(':', eq == std::string::npos ? 0 : eq);
        if (eq == std::string::npos || colon == std::string::npos)
            throw std::invalid_argument("box spec must look like i=lo:hi, got '" + spec + "'");
        int i = std::stoi(spec.substr(0, eq));
        if (i < 1 || i > k)
            throw std::invalid_argument("box index " + std::to_string(i) + " out of range 1.." +
                                        std::to_string(k));
        Rational lo = parse_rational(spec.substr(eq + 1, colon - eq - 1));
        Rational hi = parse_rational(spec.substr(colon + 1));
        box.set_bounds(i - 1, lo, hi);
    }
    return box;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string item =
            comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
        out.push_back(parse_rational(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<unsigned> parse_exponent_list(const std::string& text, int k) {
    std::vector<Rational> rats = parse_rational_list(text);
    if (static_cast<int>(rats.size()) != k)
        throw std::invalid_argument("expected " + std::to_string(k) + " exponents");
    std::vector<unsigned> out;
    for (const auto& r : rats) {
        if (r.get_den() != 1 || r < 0) throw std::invalid_argument("exponents must be nonnegative integers");
        out.push_back(static_cast<unsigned>(r.get_num().get_ui()));
    }
    return out;
}

void print_vars(std::ostream& out, const GraphPolynomial& gp) {
    out << "vars:";
    for (int i = 0; i < gp.k; ++i)
        out << " x" << (i + 1) << "=" << gp.graph.edge(gp.edge_order[i]).id;
    out << "\n";
}

// polynomial in one variable rendered with the variable renamed
std::string univariate_text(const PiPolynomial& p, char var) {
    std::string s = p.serialize();
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == 'x' && i + 1 < s.size() && s[i + 1] == '1') {
            out += var;
            ++i;
        } else {
            out += s[i];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// verify

bool run_verification(const StableGraph& graph, VolumeTable& table, std::ostream& out,
                      std::uint64_t mc_samples, std::uint64_t mc_seed) {
    bool all_ok = true;
    auto check = [&](const std::string& name, const std::function<std::string()>& fn) {
        try {
            std::string detail = fn();
            out << "[ok] " << name << (detail.empty() ? "" : ": " + detail) << "\n";
        } catch (const std::exception& e) {
            out << "[FAIL] " << name << ": " << e.what() << "\n";
            all_ok = false;
        }
    };
    auto require = [](bool cond, const std::string& msg) {
        if (!cond) throw std::runtime_error(msg);
    };

    StatsContext ctx{table};
    GraphPolynomial gp = graph_polynomial(graph, table);
    const int k = gp.k, d = gp.d;

    out << "graph: genus " << graph.genus() << ", k " << k << ", d " << d << ", M "
        << graph.one_handle_count() << ", |Sym+| " << graph.sym_plus_order() << ", |Sym| "
        << graph.sym_order() << (graph.has_override() ? " (override)" : "") << "\n";

    check("top part consistency", [&] {
        require(gp.top == gp.full.top_part(), "top != top_part(P)");
        return "";
    });
    check("degree of top part", [&] {
        int deg = gp.top.length_degree();
        require(deg == 2 * d - k, "deg(P_top) = " + std::to_string(deg) + " but 2d-k = " +
                                      std::to_string(2 * d - k));
        return "deg(P_top) = " + std::to_string(deg) + " = 2d-k (d=" + std::to_string(d) +
               ", k=" + std::to_string(k) + ")";
    });
    check("coefficient positivity", [&] {
        require(gp.full.all_coefficients_positive(), "nonpositive coefficient in P");
        return "";
    });

    BoxCone full = BoxCone::full(k);
    MassResult mass = total_mass(gp, full, ctx);
    ExactScalar c_full = leading_coefficient(gp, full, ctx);

    check("mass degree", [&] {
        require(mass.mass.degree() == 2 * d - 1, "deg_L M = " + std::to_string(mass.mass.degree()) +
                                                     " but 2d-1 = " + std::to_string(2 * d - 1));
        return "deg_L M = " + std::to_string(mass.mass.degree()) + " = 2d-1";
    });
    check("leading coefficient consistency", [&] {
        require(mass.mass.leading_coefficient() == c_full, "L^{2d-1} coefficient != C");
        return "";
    });

    BoxCone left(k), right(k);
    left.set_bounds(0, Rational(0), Rational(1, 2));
    right.set_bounds(0, Rational(1, 2), Rational(1));
    check("probability normalization", [&] {
        require(box_probability(gp, full, ctx) == 1, "nu(full) != 1");
        Rational pl = box_probability(gp, left, ctx);
        Rational pr = box_probability(gp, right, ctx);
        require(pl + pr == 1, "partition probabilities sum to " + rational_str(pl + pr));
        return "nu(full) = 1, split at x1 = 1/2 sums exactly";
    });
    check("mass additivity", [&] {
        ExactScalar cl = leading_coefficient(gp, left, ctx);
        ExactScalar cr = leading_coefficient(gp, right, ctx);
        require(cl + cr == c_full, "C_left + C_right != C_full");
        return "";
    });

    check("calibration independence", [&] {
        StatsContext scaled{table, Rational(7, 3)};
        BoxCone probe = k >= 2 ? left : full;
        require(box_probability(gp, probe, ctx) == box_probability(gp, probe, scaled),
                "box probability depends on measure scale");
        std::vector<Rational> pt(k);
        Rational rest(1);
        for (int i = 0; i + 1 < k; ++i) {
            pt[i] = make_rational(1, 2 * static_cast<long>(gp.weights[i]) * (k - 1));
            rest -= Rational(gp.weights[i]) * pt[i];
        }
        pt[k - 1] = rest / Rational(gp.weights[k - 1]);
        require(density_at(gp, pt, ctx) == density_at(gp, pt, scaled),
                "density depends on measure scale");
        std::vector<unsigned> m(k, 0);
        m[0] = 1;
        require(moment(gp, m, ctx) == moment(gp, m, scaled), "moment depends on measure scale");
        if (k >= 2)
            require(marginal(gp, 0, ctx).density == marginal(gp, 0, scaled).density,
                    "marginal depends on measure scale");
        return "";
    });

    check("weight covariance", [&] {
        std::vector<GraphVertex> vs;
        for (int i = 0; i < graph.vertex_count(); ++i) vs.push_back(graph.vertex(i));
        std::vector<GraphEdge> es;
        for (int i = 0; i < graph.edge_count(); ++i) {
            GraphEdge e = graph.edge(i);
            e.weight *= 3;
            es.push_back(e);
        }
        StableGraph scaled_graph(std::move(vs), std::move(es));
        GraphPolynomial gp3 = graph_polynomial(scaled_graph, table);
        BoxCone probe = k >= 2 ? left : full;
        require(box_probability(gp, probe, ctx) == box_probability(gp3, probe, ctx),
                "probability changed under common weight scaling");
        return "";
    });

    bool pants = true;
    for (int i = 0; i < graph.vertex_count() && pants; ++i)
        pants = graph.vertex(i).genus == 0 && graph.valence(i) == 3;
    bool unit_weights = true;
    for (int i = 0; i < graph.edge_count(); ++i)
        if (graph.edge(i).weight != 1) unit_weights = false;

    if (pants && unit_weights) {
        check("product-form density", [&] {
            Rational fac(factorial_int(2 * d - 1));
            for (int variant = 0; variant < 3; ++variant) {
                std::vector<Rational> pt(k);
                long denom = 0;
                for (int i = 0; i < k; ++i) denom += i + 1 + variant;
                Rational expected = fac;
                Rational total(0);
                for (int i = 0; i < k; ++i) {
                    pt[i] = make_rational(i + 1 + variant, denom);
                    expected *= pt[i];
                    total += pt[i];
                }
                require(total == 1, "internal: bad test point");
                require(density_at(gp, pt, ctx) == expected,
                        "density != (2d-1)! x1...xk at a rational point");
            }
            return "matches (2d-1)! x1...xk";
        });
        check("cone-form equivalence", [&] {
            BoxCone probe(k);
            probe.set_bounds(0, Rational(1, 5), Rational(4, 5));
            if (k >= 2) probe.set_bounds(1, Rational(1, 7), Rational(6, 7));
            std::vector<unsigned> ones(k, 1);
            PiPolynomial bare = PiPolynomial::monomial(k, ones, ExactScalar(1));
            ExactScalar cone = cone_integral(bare, gp.domain(), probe);
            Rational via_cone = Rational(factorial_int(2 * d)) * cone.rational_value();
            require(box_probability(gp, probe, ctx) == via_cone,
                    "nu(box) != (6g-6)! cone integral");
            return "nu(box) = (6g-6)! * cone integral";
        });
    }

    if (k >= 2) {
        check("marginal normalization", [&] {
            MarginalDensity m = marginal(gp, 0, ctx);
            Rational integral(0);
            for (const auto& [e, c] : m.density.monomials())
                integral +=
                    c.rational_value() * pow_rational(m.support_hi, e[0] + 1) / Rational(e[0] + 1);
            require(integral == 1, "marginal integrates to " + rational_str(integral));
            return "";
        });
    }

    check("moment of 1", [&] {
        std::vector<unsigned> zero(k, 0);
        require(moment(gp, zero, ctx) == 1, "E[1] != 1");
        return "";
    });

    if (mc_samples > 0 && k >= 2) {
        check("Monte Carlo consistency", [&] {
            SampleBatch batch = sample_distribution(gp, mc_samples, mc_seed);
            std::vector<BoxCone> boxes;
            BoxCone b1(k);
            b1.set_bounds(0, Rational(0), make_rational(1, 2));
            boxes.push_back(b1);
            std::vector<std::vector<unsigned>> moments;
            for (int i = 0; i < k; ++i) {
                std::vector<unsigned> m(k, 0);
                m[i] = 1;
                moments.push_back(m);
                m[i] = 2;
                moments.push_back(m);
            }
            StatsReport report = empirical_compare(batch, gp, boxes, moments, ctx);
            out << report.render_machine();
            out << report.render_table();
            require(report.max_abs_z() < 4.0,
                    "z-score " + std::to_string(report.max_abs_z()) + " >= 4");
            std::ostringstream d;
            d << "max |z| = " << report.max_abs_z() << " over " << report.records.size()
              << " statistics";
            return d.str();
        });
    }

    out << (all_ok ? "verify: all checks passed" : "verify: FAILURES above") << "\n";
    return all_ok;
}

}  // namespace

// ---------------------------------------------------------------------------

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    GlobalOpts g;
    int exit_code = 0;

    CLI::App app{"exact length statistics of random multicurves"};
    app.require_subcommand(1);
    app.add_option("--format", g.format, "value rendering: exact|decimal|both")
        ->check(CLI::IsMember({"exact", "decimal", "both"}))
        ->capture_default_str();
    app.add_option("--digits", g.digits, "decimal digits")->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--cache", g.cache_path, "volume cache file (loaded if present, saved after)");
    app.add_option("--cap", g.cap, "volume complexity cap on 2g-2+n")->capture_default_str();

    // table is created lazily so --cache/--cap are honored
    std::optional<VolumeTable> table;
    auto the_table = [&]() -> VolumeTable& {
        if (!table) {
            if (!g.cache_path.empty() && std::filesystem::exists(g.cache_path))
                table.emplace(VolumeTable::load(g.cache_path, g.cap));
            else
                table.emplace(g.cap);
        }
        return *table;
    };
    auto load_graph_poly = [&](const std::string& path) {
        StableGraph graph = StableGraph::parse(slurp(path));
        return graph_polynomial(graph, the_table());
    };

    // wpvol
    auto* wpvol = app.add_subcommand("wpvol", "print a Weil-Petersson volume polynomial");
    unsigned wp_g = 0, wp_n = 0;
    wpvol->add_option("g", wp_g, "genus")->required();
    wpvol->add_option("n", wp_n, "boundary components")->required();
    wpvol->callback([&] { out << the_table().volume({wp_g, wp_n}).serialize() << "\n"; });

    // poly
    auto* poly = app.add_subcommand("poly", "graph polynomial of a multicurve");
    std::string poly_file;
    poly->add_option("file", poly_file, "multicurve file")->required();
    poly->callback([&] {
        GraphPolynomial gp = load_graph_poly(poly_file);
        print_vars(out, gp);
        out << "P = " << gp.full.serialize() << "\n";
        out << "P_top = " << gp.top.serialize() << "\n";
    });

    // mass
    auto* mass = app.add_subcommand("mass", "horoball mass polynomial and leading coefficient");
    std::string mass_file;
    std::vector<std::string> mass_boxes;
    mass->add_option("file", mass_file)->required();
    mass->add_option("--box", mass_boxes, "restrict normalized coordinate i to lo:hi");
    mass->callback([&] {
        GraphPolynomial gp = load_graph_poly(mass_file);
        BoxCone box = parse_boxes(gp.k, mass_boxes);
        StatsContext ctx{the_table()};
        MassResult m = total_mass(gp, box, ctx);
        print_vars(out, gp);
        out << "M(L) = " << m.mass.to_string() << "\n";
        out << "C = " << scalar_text(leading_coefficient(gp, box, ctx), g) << "\n";
        out << "feasible: " << (m.feasible ? "yes" : "no") << "\n";
    });

    // density
    auto* density = app.add_subcommand("density", "limiting density at a point of the simplex");
    std::string density_file, density_point;
    density->add_option("file", density_file)->required();
    density->add_option("--point", density_point, "comma-separated rationals")->required();
    density->callback([&] {
        GraphPolynomial gp = load_graph_poly(density_file);
        StatsContext ctx{the_table()};
        std::vector<Rational> pt = parse_rational_list(density_point);
        out << "density = " << rational_text(density_at(gp, pt, ctx), g) << "\n";
    });

    // prob
    auto* prob = app.add_subcommand("prob", "probability of a box under the limiting law");
    std::string prob_file;
    std::vector<std::string> prob_boxes;
    prob->add_option("file", prob_file)->required();
    prob->add_option("--box", prob_boxes)->required();
    prob->callback([&] {
        GraphPolynomial gp = load_graph_poly(prob_file);
        StatsContext ctx{the_table()};
        BoxCone box = parse_boxes(gp.k, prob_boxes);
        out << "probability = " << rational_text(box_probability(gp, box, ctx), g) << "\n";
    });

    // moments
    auto* moments_cmd = app.add_subcommand("moments", "moments of the limiting distribution");
    std::string moments_file;
    std::vector<std::string> moment_specs;
    moments_cmd->add_option("file", moments_file)->required();
    moments_cmd->add_option("--m", moment_specs, "comma-separated exponents, one vector per flag")
        ->required();
    moments_cmd->callback([&] {
        GraphPolynomial gp = load_graph_poly(moments_file);
        StatsContext ctx{the_table()};
        for (const auto& spec : moment_specs) {
            std::vector<unsigned> m = parse_exponent_list(spec, gp.k);
            out << moment_stat_name(m) << " = " << rational_text(moment(gp, m, ctx), g) << "\n";
        }
    });

    // marginal
    auto* marg = app.add_subcommand("marginal", "marginal density of one component");
    std::string marg_file;
    int marg_index = 1;
    int marg_plot = 0;
    marg->add_option("file", marg_file)->required();
    marg->add_option("--i", marg_index, "1-based component index")->required();
    marg->add_option("--plot", marg_plot, "emit N+1 sampled (t, density) pairs");
    marg->callback([&] {
        GraphPolynomial gp = load_graph_poly(marg_file);
        StatsContext ctx{the_table()};
        MarginalDensity m = marginal(gp, marg_index - 1, ctx);
        print_vars(out, gp);
        out << "support: (0, " << rational_str(m.support_hi) << ")\n";
        out << "density(t) = " << univariate_text(m.density, 't') << "\n";
        for (int j = 0; j <= marg_plot && marg_plot > 0; ++j) {
            Rational t = m.support_hi * Rational(j) / Rational(marg_plot);
            Rational y = m.density.eval_exact({t}).rational_value();
            if (g.format == "exact" || g.format == "both")
                out << rational_str(t) << " " << rational_str(y);
            if (g.format == "both") out << " ";
            if (g.format == "decimal" || g.format == "both")
                out << decimal_string(t, g.digits) << " " << decimal_string(y, g.digits);
            out << "\n";
        }
    });

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "seeded samples from the limiting law");
    std::string sample_file;
    std::uint64_t sample_count = 1000, sample_seed = 0;
    unsigned sample_workers = 4;
    sample_cmd->add_option("file", sample_file)->required();
    sample_cmd->add_option("--count", sample_count)->required();
    sample_cmd->add_option("--seed", sample_seed)->required();
    sample_cmd->add_option("--workers", sample_workers)->capture_default_str();
    sample_cmd->callback([&] {
        GraphPolynomial gp = load_graph_poly(sample_file);
        SampleBatch batch = sample_distribution(gp, sample_count, sample_seed, sample_workers);
        out << "# sample k=" << batch.k << " count=" << batch.size() << " seed=" << batch.seed
            << " workers=" << batch.workers << "\n";
        out << batch.serialize();
    });

    // verify
    auto* verify = app.add_subcommand("verify", "run the invariant suite for a multicurve");
    std::string verify_file;
    std::uint64_t verify_mc = 0, verify_seed = 1;
    verify->add_option("file", verify_file)->required();
    verify->add_option("--mc", verify_mc, "also run a seeded Monte Carlo check with N samples");
    verify->add_option("--seed", verify_seed)->capture_default_str();
    verify->callback([&] {
        StableGraph graph = StableGraph::parse(slurp(verify_file));
        if (!run_verification(graph, the_table(), out, verify_mc, verify_seed)) exit_code = 1;
    });

    // enumerate
    auto* enum_cmd = app.add_subcommand("enumerate", "all multicurve types for (genus, k)");
    unsigned enum_genus = 2;
    int enum_curves = 1;
    unsigned long enum_weight_cap = 1;
    enum_cmd->add_option("--genus", enum_genus)->required();
    enum_cmd->add_option("--curves", enum_curves)->required();
    enum_cmd->add_option("--weight-cap", enum_weight_cap)->capture_default_str();
    enum_cmd->callback([&] {
        auto graphs = enumerate_stable_graphs(enum_genus, enum_curves, enum_weight_cap);
        out << "count: " << graphs.size() << "\n";
        for (std::size_t i = 0; i < graphs.size(); ++i)
            out << (i + 1) << " " << graphs[i].canonical_form() << "\n";
    });

    // count-coef
    auto* ccoef = app.add_subcommand("count-coef", "counting coefficient with user-supplied ratio");
    std::string ccoef_file, ccoef_ratio;
    std::vector<std::string> ccoef_boxes;
    ccoef->add_option("file", ccoef_file)->required();
    ccoef->add_option("--ratio", ccoef_ratio, "the value of B(X)/b_g as p/q")->required();
    ccoef->add_option("--box", ccoef_boxes);
    ccoef->callback([&] {
        GraphPolynomial gp = load_graph_poly(ccoef_file);
        StatsContext ctx{the_table()};
        BoxCone box = parse_boxes(gp.k, ccoef_boxes);
        ExactScalar c = counting_coefficient(gp, box, parse_rational(ccoef_ratio), ctx);
        out << "counting_coefficient = " << scalar_text(c, g) << "\n";
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    } catch (const ResourceLimitError& e) {
        err << "resource cap exceeded: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    if (!g.cache_path.empty() && table) {
        try {
            table->save(g.cache_path);
        } catch (const std::exception& e) {
            err << "warning: could not save cache: " << e.what() << "\n";
        }
    }
    return exit_code;
}

}  // namespace mcstat
