// Command-line front end: classification, relation, factorization, Gaussian
// frame-set computation, and desk-scale verification of the duality and
// covariance identities, all reporting deterministic JSON.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "latsym/latsym.hpp"

namespace {

using namespace latsym;

struct Config {
    int grid_n = 0;  // 0 = per-dimension default
    double extent = 0.0;
    int trunc = 0;
    double tol = kTolSym;
    std::uint64_t seed = 12345;
    std::string output;
    bool verbose = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Grid config_grid(const Config& cfg, int d) {
    Grid g = default_grid(d);
    const int n = cfg.grid_n > 0 ? cfg.grid_n : g.n;
    const double extent = cfg.extent > 0.0 ? cfg.extent : g.extent;
    return make_grid(d, n, extent);
}

int config_trunc(const Config& cfg, int d) {
    if (cfg.trunc > 0) return cfg.trunc;
    return d == 1 ? 8 : 4;
}

void write_config(JsonWriter& w, const Config& cfg, int d, const Grid* grid, int trunc) {
    w.key("config").begin_object();
    w.key("d").value(d);
    w.key("grid").value(grid ? grid->n : 0);
    w.key("extent").value(grid ? grid->extent : 0.0);
    w.key("trunc").value(trunc);
    w.key("tol").value(cfg.tol);
    w.key("seed").value(static_cast<double>(cfg.seed));
    w.end_object();
}

void emit(const Config& cfg, const std::string& text) {
    if (cfg.output.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(cfg.output, std::ios::binary);
        if (!out) throw ParseError("cannot write output file: " + cfg.output);
        out << text << "\n";
    }
}

void write_gaussian_object(JsonWriter& w, const GaussianFrameParams& gp) {
    w.begin_object();
    w.key("X").matrix(gp.x);
    w.key("Y").matrix(gp.y);
    w.key("k").vector(gp.k);
    w.key("is_frame").value(gp.is_frame);
    w.end_object();
}

int run_classify(const Config& cfg, const std::string& input_path) {
    const std::string text = read_file(input_path);
    const LatticeMatrix a = parse_matrix(text, cfg.tol);
    const ClassificationReport rep = classify(a, cfg.tol);
    JsonWriter w;
    w.begin_object();
    w.key("command").value(std::string("classify"));
    w.key("input_digest").value(input_digest(text));
    w.key("theta").matrix(rep.theta);
    w.key("pfaffian");
    if (rep.pfaffian_value)
        w.value(*rep.pfaffian_value);
    else
        w.null();
    w.key("covolume").value(rep.covolume_value);
    w.key("density_ok").value(rep.density_ok);
    w.key("separable_K");
    if (rep.separable_k)
        w.matrix(*rep.separable_k);
    else
        w.null();
    w.key("k_diagonal").value(rep.k_diagonal);
    w.key("gaussian");
    if (rep.k_diagonal && rep.separable_k) {
        const GaussianFrameParams gp = gaussian_frame_params(a, Vec::Ones(a.d), cfg.tol);
        write_gaussian_object(w, gp);
    } else {
        w.null();
    }
    w.key("lagrangian_split");
    if (rep.split) {
        w.begin_object();
        w.key("left").begin_array();
        for (const int i : rep.split->left) w.value(i + 1);
        w.end_array();
        w.key("right").begin_array();
        for (const int i : rep.split->right) w.value(i + 1);
        w.end_array();
        w.end_object();
    } else {
        w.null();
    }
    w.key("residuals").begin_object().end_object();
    write_config(w, cfg, a.d, nullptr, 0);
    w.end_object();
    emit(cfg, w.str());
    if (cfg.verbose)
        std::cerr << "classify: covolume " << rep.covolume_value << ", density_ok "
                  << rep.density_ok << "\n";
    return 0;
}

int run_relate(const Config& cfg, const std::string& a_path, const std::string& b_path) {
    const std::string a_text = read_file(a_path);
    const std::string b_text = read_file(b_path);
    const LatticeMatrix a = parse_matrix(a_text, cfg.tol);
    const LatticeMatrix b = parse_matrix(b_text, cfg.tol);
    // Orientation: S carries the second document's lattice onto the first,
    // so a = S b when the forms agree.
    const std::optional<Mat> s = symplectically_related(b, a, cfg.tol);
    JsonWriter w;
    w.begin_object();
    w.key("command").value(std::string("relate"));
    w.key("input_digest").value(input_digest(a_text + "\n" + b_text));
    w.key("related").value(static_cast<bool>(s));
    w.key("S");
    if (s)
        w.matrix(*s);
    else
        w.null();
    w.key("residual");
    if (s)
        w.value(symplectic_residual(*s));
    else
        w.value(max_abs(Mat(symplectic_form_of(a).theta - symplectic_form_of(b).theta)));
    w.key("residuals").begin_object().end_object();
    write_config(w, cfg, a.d, nullptr, 0);
    w.end_object();
    emit(cfg, w.str());
    return 0;
}

void write_word(JsonWriter& w, const Word& word) {
    w.begin_array();
    for (const Generator& gen : word) {
        w.begin_object();
        switch (gen.kind) {
            case Generator::Kind::J:
                w.key("type").value(std::string("J"));
                break;
            case Generator::Kind::V:
                w.key("type").value(std::string("V"));
                w.key("P").matrix(gen.param);
                break;
            case Generator::Kind::M:
                w.key("type").value(std::string("M"));
                w.key("L").matrix(gen.param);
                break;
        }
        w.end_object();
    }
    w.end_array();
}

int run_factorize(const Config& cfg, const std::string& input_path, bool two_free) {
    const std::string text = read_file(input_path);
    const LatticeMatrix s_doc = parse_matrix(text, cfg.tol);
    const Mat s = s_doc.m;
    if (!is_symplectic(s, cfg.tol))
        throw NotSymplectic("input matrix is not symplectic within tolerance");
    JsonWriter w;
    w.begin_object();
    w.key("command").value(std::string("factorize"));
    w.key("input_digest").value(input_digest(text));
    if (two_free) {
        const auto [s1, s2] = two_free_factorization(s);
        w.key("S1").matrix(s1);
        w.key("S2").matrix(s2);
        w.key("residual").value(max_abs(Mat(s1 * s2 - s)));
    } else {
        const Word word = full_factorization(s);
        w.key("free").value(is_free(s, 1e-6 * std::max(1.0, max_abs(s))));
        w.key("word");
        write_word(w, word);
        w.key("residual").value(max_abs(Mat(word_matrix(word, s_doc.d) - s)));
    }
    w.key("residuals").begin_object().end_object();
    write_config(w, cfg, s_doc.d, nullptr, 0);
    w.end_object();
    emit(cfg, w.str());
    return 0;
}

int run_pfaffian(const Config& cfg, const std::string& input_path, bool input_is_form) {
    const std::string text = read_file(input_path);
    JsonWriter w;
    w.begin_object();
    w.key("command").value(std::string("pfaffian"));
    w.key("input_digest").value(input_digest(text));
    if (input_is_form) {
        const LatticeMatrix doc = parse_matrix(text, cfg.tol);
        const SymplecticForm form = make_symplectic_form(doc.m, cfg.tol);
        const double pf = pfaffian(form);
        w.key("theta").matrix(form.theta);
        w.key("pfaffian").value(pf);
        w.key("covolume").value(std::abs(pf));
        w.key("density_ok").value(std::abs(pf) <= 1.0 + 1e-12);
        write_config(w, cfg, form.d, nullptr, 0);
    } else {
        const LatticeMatrix a = parse_matrix(text, cfg.tol);
        const SymplecticForm form = symplectic_form_of(a);
        w.key("theta").matrix(form.theta);
        w.key("pfaffian").value(pfaffian(form));
        w.key("covolume").value(covolume(a));
        w.key("density_ok").value(covolume(a) <= 1.0 + 1e-12);
        write_config(w, cfg, a.d, nullptr, 0);
    }
    w.end_object();
    emit(cfg, w.str());
    return 0;
}

int run_adjoint(const Config& cfg, const std::string& input_path) {
    const std::string text = read_file(input_path);
    const LatticeMatrix a = parse_matrix(text, cfg.tol);
    const LatticeMatrix adj = adjoint_matrix(a);
    JsonWriter w;
    w.begin_object();
    w.key("command").value(std::string("adjoint"));
    w.key("input_digest").value(input_digest(text));
    w.key("adjoint").matrix(adj.m);
    w.key("covolume").value(covolume(a));
    w.key("adjoint_covolume").value(covolume(adj));
    write_config(w, cfg, a.d, nullptr, 0);
    w.end_object();
    emit(cfg, w.str());
    return 0;
}

Vec parse_dvec(const std::string& text, int d) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(parse_expression(item));
    if (static_cast<int>(vals.size()) != d)
        throw ParseError("--dvec needs " + std::to_string(d) + " comma-separated values");
    Vec v(d);
    for (int i = 0; i < d; ++i) v(i) = vals[i];
    return v;
}

int run_gaussian(const Config& cfg, const std::string& input_path, const std::string& dvec) {
    const std::string text = read_file(input_path);
    const LatticeMatrix a = parse_matrix(text, cfg.tol);
    const Vec d_diag = dvec.empty() ? Vec(Vec::Ones(a.d)) : parse_dvec(dvec, a.d);
    const GaussianFrameParams gp = gaussian_frame_params(a, d_diag, cfg.tol);
    JsonWriter w;
    w.begin_object();
    w.key("command").value(std::string("gaussian"));
    w.key("input_digest").value(input_digest(text));
    w.key("theta").matrix(symplectic_form_of(a).theta);
    w.key("gaussian");
    write_gaussian_object(w, gp);
    write_config(w, cfg, a.d, nullptr, 0);
    w.end_object();
    emit(cfg, w.str());
    return 0;
}

int run_pre_iwasawa(const Config& cfg, const std::string& input_path) {
    const std::string text = read_file(input_path);
    const LatticeMatrix doc = parse_matrix(text, cfg.tol);
    const PreIwasawa pi = pre_iwasawa(doc.m);
    const Mat recon = v_p_matrix(pi.y) * m_l_matrix(spd_sqrt(pi.x)) * pi.o;
    JsonWriter w;
    w.begin_object();
    w.key("command").value(std::string("pre-iwasawa"));
    w.key("input_digest").value(input_digest(text));
    w.key("X").matrix(pi.x);
    w.key("Y").matrix(pi.y);
    w.key("P").matrix(pi.p);
    w.key("Q").matrix(pi.q);
    w.key("residual").value(max_abs(Mat(recon - doc.m)));
    write_config(w, cfg, doc.d, nullptr, 0);
    w.end_object();
    emit(cfg, w.str());
    return 0;
}

std::vector<Vec> default_probe_points(const Grid& grid) {
    std::vector<Vec> zs;
    const double h = grid.h();
    auto snap = [&](double x) { return std::round(x / h) * h; };
    if (grid.d == 1) {
        const double raw[8][2] = {{0.5, 0.0},  {0.0, 0.5},  {1.0, 1.0},  {-0.5, 1.5},
                                  {2.0, -1.0}, {1.5, 0.5},  {-1.0, -1.0}, {0.5, -2.0}};
        for (const auto& r : raw) {
            Vec z(2);
            z << snap(r[0]), r[1];
            zs.push_back(z);
        }
    } else {
        const double raw[8][4] = {{0.5, 0.0, 0.0, 0.0},  {0.0, 0.5, 0.0, 0.0},
                                  {0.0, 0.0, 0.5, 0.0},  {0.0, 0.0, 0.0, 0.5},
                                  {0.5, 0.5, 0.5, 0.5},  {1.0, 0.0, -0.5, 0.0},
                                  {0.0, 1.0, 0.0, -0.5}, {-0.5, 0.5, 1.0, 0.0}};
        for (const auto& r : raw) {
            Vec z(4);
            z << snap(r[0]), snap(r[1]), r[2], r[3];
            zs.push_back(z);
        }
    }
    return zs;
}

int run_verify(const Config& cfg, const std::string& mode, const std::string& input_path,
               const std::string& a_path, const std::string& b_path, int dim) {
    JsonWriter w;
    w.begin_object();
    w.key("command").value("verify " + mode);
    if (mode == "rho") {
        const std::string text = read_file(input_path);
        const LatticeMatrix doc = parse_matrix(text, cfg.tol);
        if (!is_symplectic(doc.m, cfg.tol))
            throw NotSymplectic("input matrix is not symplectic within tolerance");
        const Grid grid = config_grid(cfg, doc.d);
        const SampledFunction f = standard_gaussian(grid);
        const double r = rho_relatedness_residual(doc.m, f, default_probe_points(grid));
        w.key("input_digest").value(input_digest(text));
        w.key("residuals").begin_object();
        w.key("rho").value(r);
        w.end_object();
        write_config(w, cfg, doc.d, &grid, 0);
    } else if (mode == "equivalence") {
        const std::string a_text = read_file(a_path);
        const std::string b_text = read_file(b_path);
        const LatticeMatrix a = parse_matrix(a_text, cfg.tol);
        const LatticeMatrix b = parse_matrix(b_text, cfg.tol);
        const Grid grid = config_grid(cfg, a.d);
        const int radius = config_trunc(cfg, a.d);
        const SampledFunction g = standard_gaussian(grid);
        const double r = equivalence_residual(g, g, a, b, TruncationSpec{radius}, cfg.tol);
        w.key("input_digest").value(input_digest(a_text + "\n" + b_text));
        w.key("residuals").begin_object();
        w.key("equivalence").value(r);
        w.end_object();
        write_config(w, cfg, a.d, &grid, radius);
    } else if (mode == "janssen") {
        const std::string text = read_file(input_path);
        const LatticeMatrix a = parse_matrix(text, cfg.tol);
        const Grid grid = config_grid(cfg, a.d);
        const int radius = config_trunc(cfg, a.d);
        const SampledFunction g = standard_gaussian(grid);
        const double r = janssen_residual(g, g, g, a, TruncationSpec{radius});
        w.key("input_digest").value(input_digest(text));
        w.key("residuals").begin_object();
        w.key("janssen").value(r);
        w.end_object();
        write_config(w, cfg, a.d, &grid, radius);
    } else if (mode == "wexler-raz") {
        const std::string text = read_file(input_path);
        const LatticeMatrix a = parse_matrix(text, cfg.tol);
        const Grid grid = config_grid(cfg, a.d);
        const int radius = config_trunc(cfg, a.d);
        const SampledFunction g = standard_gaussian(grid);
        const SampledFunction h = canonical_dual(g, a, TruncationSpec{radius}, 400, 1e-8,
                                                 cfg.seed);
        const double r = wexler_raz_residual(g, h, a, TruncationSpec{radius});
        w.key("input_digest").value(input_digest(text));
        w.key("residuals").begin_object();
        w.key("wexler_raz").value(r);
        w.end_object();
        write_config(w, cfg, a.d, &grid, radius);
    } else if (mode == "conjugation") {
        const Grid grid = config_grid(cfg, dim);
        const SampledFunction f = standard_gaussian(grid);
        Rng rng(cfg.seed);
        double worst = 0.0;
        for (int i = 0; i < 4; ++i) {
            Vec z(2 * dim);
            for (int j = 0; j < 2 * dim; ++j) z(j) = rng.uniform(-2.0, 2.0);
            worst = std::max(worst, conjugation_symmetry_residual(f, z));
        }
        w.key("input_digest").value(std::string(""));
        w.key("residuals").begin_object();
        w.key("conjugation").value(worst);
        w.end_object();
        write_config(w, cfg, dim, &grid, 0);
    } else {
        throw ParseError("unknown verify mode: " + mode);
    }
    w.end_object();
    emit(cfg, w.str());
    return 0;
}

int run_bounds(const Config& cfg, const std::string& input_path, int probes) {
    const std::string text = read_file(input_path);
    const LatticeMatrix a = parse_matrix(text, cfg.tol);
    const Grid grid = config_grid(cfg, a.d);
    const int radius = config_trunc(cfg, a.d);
    const SampledFunction g = standard_gaussian(grid);
    const FrameBounds fb =
        frame_bounds_estimate(g, a, TruncationSpec{radius}, probes, cfg.seed);
    JsonWriter w;
    w.begin_object();
    w.key("command").value(std::string("bounds"));
    w.key("input_digest").value(input_digest(text));
    w.key("bounds").begin_object();
    w.key("lower").value(fb.lower);
    w.key("upper").value(fb.upper);
    w.key("ratio").value(fb.upper > 0.0 ? fb.lower / fb.upper : 0.0);
    w.key("iterations").value(fb.iterations);
    w.key("converged").value(fb.converged);
    w.end_object();
    write_config(w, cfg, a.d, &grid, radius);
    w.end_object();
    emit(cfg, w.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symplectic classification of time-frequency lattices"};
    app.require_subcommand(1);

    Config cfg;
    app.add_option("--grid", cfg.grid_n, "Points per axis (power of two)");
    app.add_option("--extent", cfg.extent, "Window extent");
    app.add_option("--trunc", cfg.trunc, "Truncation radius");
    app.add_option("--tol", cfg.tol, "Comparison tolerance");
    app.add_option("--seed", cfg.seed, "Random seed");
    app.add_option("--output", cfg.output, "Write the JSON report to a file");
    app.add_flag("--verbose", cfg.verbose, "Human-readable summary on stderr");

    std::string input_path, a_path, b_path, dvec, verify_mode;
    bool two_free = false, input_is_form = false;
    int probes = 4, dim = 1;

    CLI::App* c_classify = app.add_subcommand("classify", "Classify a lattice matrix");
    c_classify->add_option("--input", input_path, "Lattice document")->required();

    CLI::App* c_relate = app.add_subcommand("relate", "Find S with a = S b");
    c_relate->add_option("--a", a_path, "First lattice document")->required();
    c_relate->add_option("--b", b_path, "Second lattice document")->required();

    CLI::App* c_fact = app.add_subcommand("factorize", "Generator word of a symplectic matrix");
    c_fact->add_option("--input", input_path, "Symplectic matrix document")->required();
    c_fact->add_flag("--two-free", two_free, "Report the two-factor free splitting instead");

    CLI::App* c_pf = app.add_subcommand("pfaffian", "Pfaffian and covolume");
    c_pf->add_option("--input", input_path, "Lattice document")->required();
    c_pf->add_flag("--form", input_is_form, "Input is already an antisymmetric form");

    CLI::App* c_adj = app.add_subcommand("adjoint", "Adjoint lattice matrix");
    c_adj->add_option("--input", input_path, "Lattice document")->required();

    CLI::App* c_gauss = app.add_subcommand("gaussian", "Gaussian frame-set parameters");
    c_gauss->add_option("--input", input_path, "Lattice document")->required();
    c_gauss->add_option("--dvec", dvec, "Diagonal window parameter, comma separated");

    CLI::App* c_pre = app.add_subcommand("pre-iwasawa", "Shear-dilation-rotation splitting");
    c_pre->add_option("--input", input_path, "Symplectic matrix document")->required();

    CLI::App* c_verify = app.add_subcommand("verify", "Desk-scale identity checks");
    c_verify->add_option("mode", verify_mode, "rho|equivalence|janssen|wexler-raz|conjugation")
        ->required();
    c_verify->add_option("--input", input_path, "Primary document");
    c_verify->add_option("--a", a_path, "First lattice document");
    c_verify->add_option("--b", b_path, "Second lattice document");
    c_verify->add_option("--dim", dim, "Dimension for checks without an input document");

    CLI::App* c_bounds = app.add_subcommand("bounds", "Frame-bound estimates");
    c_bounds->add_option("--input", input_path, "Lattice document")->required();
    c_bounds->add_option("--probes", probes, "Number of probe vectors");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 1;
    }

    try {
        if (c_classify->parsed()) return run_classify(cfg, input_path);
        if (c_relate->parsed()) return run_relate(cfg, a_path, b_path);
        if (c_fact->parsed()) return run_factorize(cfg, input_path, two_free);
        if (c_pf->parsed()) return run_pfaffian(cfg, input_path, input_is_form);
        if (c_adj->parsed()) return run_adjoint(cfg, input_path);
        if (c_gauss->parsed()) return run_gaussian(cfg, input_path, dvec);
        if (c_pre->parsed()) return run_pre_iwasawa(cfg, input_path);
        if (c_verify->parsed())
            return run_verify(cfg, verify_mode, input_path, a_path, b_path, dim);
        if (c_bounds->parsed()) return run_bounds(cfg, input_path, probes);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
