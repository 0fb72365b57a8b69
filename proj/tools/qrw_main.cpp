// qrw: coined quantum walk simulator on Z and Z>=0 via the CMV spectral method.
//
// Subcommands: simulate, moments, measure, recurrence, asymptotics, compare.
// Numbers in reports come straight from the library; the CLI only formats.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "qrw/coinspec.hpp"
#include "qrw/qrw.hpp"

using namespace qrw;

namespace {

WalkLattice parse_lattice(const std::string& s) {
    if (s == "half") return WalkLattice::HalfLine;
    if (s == "line") return WalkLattice::Line;
    throw CoinSpecError("--lattice must be 'half' or 'line'");
}

WalkModel build_walk(WalkLattice lat, const CoinSpec& spec) {
    return lat == WalkLattice::HalfLine ? halfline_walk(spec.coins) : line_walk(spec.coins);
}

WaveFunction load_state_file(const std::string& path, WalkLattice lat) {
    std::ifstream in(path);
    if (!in) throw CoinSpecError("cannot open state file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    double drift = 0.0;
    WaveFunction psi = load_state_json(ss.str(), lat, &drift);
    if (drift > 1e-9)
        std::cerr << "warning: renormalizing state (norm was off by " << drift << ")\n";
    return psi;
}

std::string spin_name(Spin s) { return s == Spin::Up ? "up" : "down"; }

void emit(const Report& rep, const std::string& format, const std::string& output) {
    std::string text = format == "json" ? to_json(rep) : to_csv(rep);
    if (output.empty())
        std::fwrite(text.data(), 1, text.size(), stdout);
    else
        write_file(output, text);
}

std::string walk_description(WalkLattice lat, const CoinSpec& spec) {
    return std::string(lat == WalkLattice::HalfLine ? "half" : "line") + ":" + spec.description;
}

// --- simulate ---------------------------------------------------------------

int cmd_simulate(const std::string& lattice_s, const std::string& coin_s,
                 const std::string& initial, int steps, const std::string& method,
                 const std::string& format, const std::string& output, const std::string& svg) {
    WalkLattice lat = parse_lattice(lattice_s);
    CoinSpec spec = load_coin_spec(coin_s);
    WalkModel walk = build_walk(lat, spec);
    WaveFunction psi0 = initial.empty()
                            ? WaveFunction{{PureState{0, Spin::Up}, cplx(1.0)}}
                            : load_state_file(initial, lat);

    bool want_direct = method == "direct" || method == "both";
    bool want_kmcg = method == "kmcg" || method == "both";
    if (!want_direct && !want_kmcg) throw CoinSpecError("--method must be direct, kmcg or both");
    if (want_kmcg && lat == WalkLattice::Line && !walk.constant_coin())
        throw std::runtime_error(
            "KMcG amplitudes for non-constant coins on the line are not available "
            "(no block measure recovery); use --method direct");

    std::vector<WaveFunction> direct = direct_trajectory(walk, psi0, steps);

    std::optional<KmcgHalfline> half_ctx;
    std::optional<KmcgLine> line_ctx;
    int max_j = 0;
    for (const auto& [st, v] : psi0)
        max_j = std::max(max_j, amplitude_index(lat, st.site, st.spin));
    if (want_kmcg) {
        int max_index = max_j + (lat == WalkLattice::HalfLine ? 2 * steps : 4 * steps) + 4;
        if (lat == WalkLattice::HalfLine)
            half_ctx.emplace(walk, max_index);
        else
            line_ctx.emplace(walk, max_index / 2 + 1);
    }

    Report rep;
    rep.kind = "amplitudes";
    rep.metadata = {{"walk", walk_description(lat, spec)},
                    {"method", method},
                    {"steps", std::to_string(steps)}};
    rep.columns = {"n", "site", "spin"};
    if (want_direct) rep.columns.insert(rep.columns.end(), {"direct", "prob_direct"});
    if (want_kmcg) rep.columns.insert(rep.columns.end(), {"kmcg", "prob_kmcg"});

    for (int n = 0; n <= steps; ++n) {
        for (const auto& [st, v] : direct[n]) {
            std::vector<ReportCell> row{double(n), double(st.site), spin_name(st.spin)};
            if (want_direct) {
                row.emplace_back(v);
                row.emplace_back(std::norm(v));
            }
            if (want_kmcg) {
                int k = amplitude_index(lat, st.site, st.spin);
                cplx acc = 0.0;
                for (const auto& [st0, v0] : psi0) {
                    int j = amplitude_index(lat, st0.site, st0.spin);
                    cplx u = n == 0 ? cplx(j == k ? 1.0 : 0.0)
                                    : (lat == WalkLattice::HalfLine
                                           ? half_ctx->amplitude(j, k, n)
                                           : line_ctx->amplitude(j, k, n));
                    acc += v0 * u;
                }
                row.emplace_back(acc);
                row.emplace_back(std::norm(acc));
            }
            rep.rows.push_back(std::move(row));
        }
    }
    emit(rep, format, output);

    if (!svg.empty()) {
        std::vector<double> xs, ys;
        for (const auto& [st, v] : direct[steps]) {
            if (st.spin == Spin::Down) continue;
            xs.push_back(st.site);
            ys.push_back(std::norm(v) + std::norm(direct[steps].count(PureState{st.site, Spin::Down})
                                                       ? direct[steps].at(PureState{st.site, Spin::Down})
                                                       : cplx(0.0)));
        }
        write_file(svg, to_svg_curve(xs, ys,
                                     "site probabilities after " + std::to_string(steps) +
                                         " steps"));
    }
    return 0;
}

// --- moments ----------------------------------------------------------------

int cmd_moments(const std::string& lattice_s, const std::string& coin_s, int n_max,
                const std::string& method, const std::string& format,
                const std::string& output) {
    WalkLattice lat = parse_lattice(lattice_s);
    CoinSpec spec = load_coin_spec(coin_s);
    WalkModel walk = build_walk(lat, spec);
    Report rep;
    rep.kind = "moments";
    rep.metadata = {{"walk", walk_description(lat, spec)}, {"method", method}};

    if (lat == WalkLattice::HalfLine) {
        rep.columns = {"n", "mu"};
        std::vector<cplx> mus;
        if (walk.constant_coin()) {
            ClosedFormMeasure mu = walk.halfline_measure();
            mus = method == "quadrature"
                      ? moments_quadrature(mu, n_max, QuadratureSpec::defaults())
                      : moments_series<cplx>([&](cplx z) { return mu.caratheodory(z); }, n_max);
        } else {
            KmcgHalfline ctx(walk, 0);
            for (int n = 0; n <= n_max; ++n) mus.push_back(ctx.amplitude(0, 0, n));
        }
        for (int n = 0; n <= n_max; ++n) rep.rows.push_back({double(n), mus[n]});
    } else {
        if (!walk.constant_coin())
            throw std::runtime_error("line moments need a constant coin (no block recovery)");
        ClosedFormMatrixMeasure mu = walk.line_measure();
        std::vector<Mat2> mus =
            method == "quadrature"
                ? moments_quadrature(mu, n_max, QuadratureSpec::defaults())
                : moments_series<Mat2>([&](cplx z) { return mu.caratheodory(z); }, n_max);
        rep.columns = {"n", "mu00", "mu01", "mu10", "mu11"};
        for (int n = 0; n <= n_max; ++n)
            rep.rows.push_back(
                {double(n), mus[n](0, 0), mus[n](0, 1), mus[n](1, 0), mus[n](1, 1)});
    }
    emit(rep, format, output);
    return 0;
}

// --- measure ----------------------------------------------------------------

int cmd_measure(const std::string& lattice_s, const std::string& coin_s, int grid,
                const std::string& format, const std::string& output, const std::string& svg) {
    WalkLattice lat = parse_lattice(lattice_s);
    CoinSpec spec = load_coin_spec(coin_s);
    WalkModel walk = build_walk(lat, spec);
    Report rep;
    rep.kind = "measure";
    rep.metadata = {{"walk", walk_description(lat, spec)}};
    std::vector<double> xs, ys;

    if (lat == WalkLattice::HalfLine) {
        rep.columns = {"type", "theta", "value"};
        if (walk.constant_coin()) {
            ClosedFormMeasure mu = walk.halfline_measure();
            for (int i = 0; i < grid; ++i) {
                double th = -pi + 2.0 * pi * (i + 0.5) / grid;
                double w = mu.weight(th);
                rep.rows.push_back({std::string("weight"), th, w});
                xs.push_back(th);
                ys.push_back(w);
            }
            if (mu.has_mass())
                rep.rows.push_back({std::string("mass"), std::arg(mu.mass_point()), mu.mass});
        } else {
            CaratheodoryEvaluator F = CaratheodoryEvaluator::ratio_limit(walk.alphas);
            NumericMeasure mu = build_numeric_measure(F, grid);
            for (int i = 0; i < grid; ++i) {
                rep.rows.push_back({std::string("weight"), mu.theta(i), mu.weight[i]});
                xs.push_back(mu.theta(i));
                ys.push_back(mu.weight[i]);
            }
            for (const auto& mp : mu.masses)
                rep.rows.push_back({std::string("mass"), mp.angle, mp.mass});
        }
    } else {
        if (!walk.constant_coin())
            throw std::runtime_error("line measure needs a constant coin (no block recovery)");
        ClosedFormMatrixMeasure mu = walk.line_measure();
        rep.columns = {"type", "theta", "w00", "w01", "w10", "w11"};
        for (int i = 0; i < grid; ++i) {
            double th = -pi + 2.0 * pi * (i + 0.5) / grid;
            Mat2 w = mu.weight(th);
            rep.rows.push_back({std::string("weight"), th, w(0, 0), w(0, 1), w(1, 0), w(1, 1)});
            xs.push_back(th);
            ys.push_back(w(0, 0).real());
        }
    }
    emit(rep, format, output);
    if (!svg.empty()) write_file(svg, to_svg_curve(xs, ys, "orthogonality measure weight"));
    return 0;
}

// --- recurrence ---------------------------------------------------------------

int cmd_recurrence(const std::string& lattice_s, const std::string& coin_s,
                   const std::string& state_file, int max_index, const std::string& format,
                   const std::string& output) {
    WalkLattice lat = parse_lattice(lattice_s);
    CoinSpec spec = load_coin_spec(coin_s);
    WalkModel walk = build_walk(lat, spec);
    Report rep;
    rep.kind = "recurrence";
    rep.metadata = {{"walk", walk_description(lat, spec)}};

    if (!state_file.empty()) {
        WaveFunction psi = load_state_file(state_file, lat);
        QuantumState q;
        for (const auto& [st, v] : psi)
            q.coefficients[amplitude_index(lat, st.site, st.spin)] = v;
        q.normalized = true;
        RecurrenceVerdict v = classify_state(walk, q);
        rep.metadata.emplace_back(
            "classification",
            v.classification == Classification::Transient ? "transient" : "recurrent");
        rep.columns = {"singularity_angle", "tag", "certificate"};
        for (const auto& c : v.certificate) {
            std::string tag =
                c.singularity.tag == SingularityTag::Pole ? "pole" : "inverse-sqrt";
            rep.rows.push_back({std::arg(c.singularity.location), tag, c.value});
        }
    } else {
        auto basis = transient_subspace(walk, max_index + 1);
        rep.metadata.emplace_back("transient_dimension", std::to_string(basis.size()));
        rep.columns = {"basis_vector", "site", "spin", "coeff"};
        for (size_t b = 0; b < basis.size(); ++b) {
            for (const auto& [k, v] : basis[b].coefficients) {
                auto [site, spin] = state_of_index(lat, k);
                rep.rows.push_back({double(b), double(site), spin_name(spin), v});
            }
        }
    }
    emit(rep, format, output);
    return 0;
}

// --- asymptotics --------------------------------------------------------------

int cmd_asymptotics(const std::string& lattice_s, const std::string& coin_s,
                    const std::string& format, const std::string& output) {
    WalkLattice lat = parse_lattice(lattice_s);
    CoinSpec spec = load_coin_spec(coin_s);
    WalkModel walk = build_walk(lat, spec);
    AsymptoticResult res = weak_limit(walk);
    Report rep;
    rep.kind = "asymptotics";
    rep.metadata = {{"walk", walk_description(lat, spec)},
                    {"limit", res.kind == AsymptoticKind::ZeroWeakLimit ? "zero-weak-limit"
                                                                        : "projector"},
                    {"moments_decay_certificate", res.moments_decay ? "yes" : "no"}};
    if (res.kind == AsymptoticKind::Projector) {
        rep.metadata.emplace_back("mass_point_angle", detail::fmt_double(std::arg(*res.z0)));
        rep.metadata.emplace_back("mass", detail::fmt_double(res.mass));
        rep.columns = {"j", "k", "u_inf"};
        for (int j = 0; j <= 5; ++j)
            for (int k = 0; k <= 5; ++k)
                rep.rows.push_back({double(j), double(k), res.projector(j, k)});
    } else {
        rep.columns = {"n", "moment_magnitude"};
        for (size_t n = 0; n < res.moment_magnitudes.size(); n += 16)
            rep.rows.push_back({double(n), res.moment_magnitudes[n]});
    }
    emit(rep, format, output);
    return 0;
}

// --- compare ------------------------------------------------------------------

int cmd_compare(const std::string& lattice_s, const std::string& coin_s, int steps, double tol,
                const std::string& format, const std::string& output) {
    WalkLattice lat = parse_lattice(lattice_s);
    CoinSpec spec = load_coin_spec(coin_s);
    WalkModel walk = build_walk(lat, spec);
    if (lat == WalkLattice::Line && !walk.constant_coin())
        throw std::runtime_error("KMcG on the line needs a constant coin; nothing to compare");
    double disc = oracle_discrepancy(walk, 9, steps);
    Report rep;
    rep.kind = "compare";
    rep.metadata = {{"walk", walk_description(lat, spec)},
                    {"steps", std::to_string(steps)},
                    {"tolerance", detail::fmt_double(tol)}};
    rep.columns = {"max_abs_difference", "within_tolerance"};
    rep.rows.push_back({disc, std::string(disc <= tol ? "yes" : "no")});
    emit(rep, format, output);
    return disc <= tol ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coined quantum walks on Z and Z>=0 via CMV spectral methods"};
    app.require_subcommand(1);

    std::string lattice = "half", coin = "hadamard", format = "csv", output, svg;
    std::string initial, state_file, method = "both", mom_method = "series";
    int steps = 10, n_max = 16, grid = 256, max_index = 3;
    double tol = 1e-8;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--lattice", lattice, "half | line")->required();
        cmd->add_option("--coin", coin, "coin preset, inline matrix, or JSON file")->required();
        cmd->add_option("--out", format, "csv | json");
        cmd->add_option("--output", output, "write the report to a file instead of stdout");
    };

    CLI::App* sim = app.add_subcommand("simulate", "evolve a state and report amplitudes");
    add_common(sim);
    sim->add_option("--initial", initial, "JSON state file (default |0 up>)");
    sim->add_option("--steps", steps, "number of steps")->required();
    sim->add_option("--method", method, "direct | kmcg | both");
    sim->add_option("--svg", svg, "write a site-probability SVG profile");

    CLI::App* mom = app.add_subcommand("moments", "moments of the orthogonality measure");
    add_common(mom);
    mom->add_option("--n", n_max, "highest moment")->required();
    mom->add_option("--method", mom_method, "series | quadrature");

    CLI::App* mea = app.add_subcommand("measure", "weight samples and mass points");
    add_common(mea);
    mea->add_option("--grid", grid, "number of angle samples");
    mea->add_option("--svg", svg, "write a weight-curve SVG");

    CLI::App* rec = app.add_subcommand("recurrence", "recurrence classification");
    add_common(rec);
    rec->add_option("--state", state_file, "JSON state file to classify");
    rec->add_option("--max-index", max_index, "transient basis over state indices 0..K");

    CLI::App* asy = app.add_subcommand("asymptotics", "weak limit of U^n");
    add_common(asy);

    CLI::App* cmp = app.add_subcommand("compare", "KMcG vs direct cross-check");
    add_common(cmp);
    cmp->add_option("--steps", steps, "number of steps")->required();
    cmp->add_option("--tol", tol, "agreement tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(lattice, coin, initial, steps, method, format, output, svg);
        if (mom->parsed()) return cmd_moments(lattice, coin, n_max, mom_method, format, output);
        if (mea->parsed()) return cmd_measure(lattice, coin, grid, format, output, svg);
        if (rec->parsed())
            return cmd_recurrence(lattice, coin, state_file, max_index, format, output);
        if (asy->parsed()) return cmd_asymptotics(lattice, coin, format, output);
        if (cmp->parsed()) return cmd_compare(lattice, coin, steps, tol, format, output);
    } catch (const CoinSpecError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
