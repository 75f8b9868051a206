#include "agl/solver.hpp"

#include <cmath>
#include <sstream>

#include "agl/analysis.hpp"
#include "agl/comparison.hpp"
#include "agl/lbfgs.hpp"
#include "agl/radial.hpp"
#include "json.hpp"

namespace agl {

void SolveConfig::validate() const {
    if (std::abs(delta) >= 1.0) throw std::invalid_argument("|delta| must be < 1");
    if (tol <= 0.0) throw std::invalid_argument("tol must be positive");
    if (R < 5.0) throw std::invalid_argument("R must be >= 5");
    if (Nr < 8 || Ntheta < 8) throw std::invalid_argument("grid too coarse");
    if (Ntheta % 2 != 0) throw std::invalid_argument("Ntheta must be even");
    if (max_iters < 1 || symmetrize_every < 1) throw std::invalid_argument("bad iteration limits");
    if (init == Init::file && init_file.empty())
        throw std::invalid_argument("init = file needs init_file");
    if (init == Init::construction && construction_N < 0)
        throw std::invalid_argument("construction_N must be >= 0");
}

Field2D radial_initial_field(const SolveConfig& config, const BoundaryPhase& phase) {
    const SymmetryClass cls = config.cls;
    const double r_max = std::max({40.0, 20.0 * std::abs(cls.d), 1.5 * config.R});
    const RadialProfile profile = solve_radial_profile(cls.d, r_max, 4096, 1e-10);

    Field2D f = Field2D::sector(cls, config.R, config.Nr, config.Ntheta);
    const Vec2 alpha = phase.alpha();
    for (int i = 1; i <= f.nr; ++i) {
        const double r = f.node_r(i);
        const double amp = profile.eta_at(r);
        const double taper = (r / config.R) * (r / config.R);
        for (int j = 0; j < f.ncols; ++j) {
            const double theta = f.node_theta(j);
            const double phi = phase.psi[j] - cls.d * theta;  // phase correction of zeta
            f.at(i, j) = complex_mul(alpha, polar_unit(cls.d * theta + taper * phi)) * amp;
        }
    }
    f.set_origin(Vec2{});
    return f;
}

namespace {

Field2D construction_initial_field(const SolveConfig& config) {
    const auto spec = ComparisonMapSpec::make(config.cls.d, config.construction_N, 0.02);
    const Field2D small = construct_comparison(spec, config.Nr, config.Ntheta);
    // Rescale D_{1/2} onto D_R node by node (identical grids).
    Field2D f = Field2D::sector(config.cls, config.R, config.Nr, config.Ntheta);
    f.data = small.data;
    if (config.cls.sign == Sign::minus) {
        // u -> iu carries the plus construction to the minus class.
        const Mat2 rot = Mat2::rotation(M_PI / 2.0);
        for (auto& v : f.data) v = rot.apply(v);
    }
    return f;
}

Field2D file_initial_field(const SolveConfig& config) {
    Field2D loaded = read_field_csv(config.init_file);
    if (!(loaded.cls == config.cls)) throw std::invalid_argument("class mismatch");
    if (std::abs(loaded.r_hi - config.R) > 1e-9 * config.R)
        throw std::invalid_argument("init file radius does not match the configured R");
    if (loaded.nr == config.Nr && loaded.ncols == config.Ntheta) return loaded;
    // Resample onto the configured grid.
    const FieldSampler sampler(loaded, false);
    Field2D f = Field2D::sector(config.cls, config.R, config.Nr, config.Ntheta);
    for (int i = 1; i <= f.nr; ++i)
        for (int j = 0; j < f.ncols; ++j) f.at(i, j) = sampler.value(f.node_r(i), f.node_theta(j));
    f.set_origin(Vec2{});
    return f;
}

}  // namespace

SolveResult minimize_2d(const SolveConfig& config, const Field2D* warm_start) {
    config.validate();
    const SymmetryClass cls = config.cls;
    const int M = 2 * cls.n() * config.Ntheta;

    const CircleMinimizeResult circle =
        minimize_circle(cls.d, cls.sign, config.delta, M, config.circle_tol);
    const BoundaryPhase& zeta = circle.phase;

    Field2D field = [&]() -> Field2D {
        if (warm_start) {
            if (!(warm_start->cls == cls) || std::abs(warm_start->r_hi - config.R) > 1e-12)
                throw std::invalid_argument("warm start field does not match the configuration");
            if (warm_start->nr == config.Nr && warm_start->ncols == config.Ntheta)
                return *warm_start;
            const FieldSampler sampler(*warm_start, false);
            Field2D f = Field2D::sector(cls, config.R, config.Nr, config.Ntheta);
            for (int i = 1; i <= f.nr; ++i)
                for (int j = 0; j < f.ncols; ++j)
                    f.at(i, j) = sampler.value(f.node_r(i), f.node_theta(j));
            return f;
        }
        switch (config.init) {
            case SolveConfig::Init::construction:
                return construction_initial_field(config);
            case SolveConfig::Init::file:
                return file_initial_field(config);
            case SolveConfig::Init::radial:
            default:
                return radial_initial_field(config, zeta);
        }
    }();
    field.delta_meta = config.delta;

    // Dirichlet ring: u(R e^{i theta}) = zeta(theta), pinned for the whole solve.
    const Vec2 alpha = zeta.alpha();
    std::vector<Vec2> ring(field.ncols);
    for (int j = 0; j < field.ncols; ++j)
        ring[j] = complex_mul(alpha, polar_unit(zeta.psi[j]));
    auto pin_boundary = [&] {
        for (int j = 0; j < field.ncols; ++j) field.at(field.nr, j) = ring[j];
    };
    pin_boundary();
    field.set_origin(Vec2{});
    project_reflection(field);
    pin_boundary();

    SolveResult res;
    res.boundary = zeta;
    res.boundary_C = circle.energy.value;

    LbfgsOptions opt;
    opt.memory = 12;
    opt.grad_tol = config.tol;
    const std::vector<double> weights = free_dof_weights(field);
    opt.precond.resize(weights.size());
    for (size_t k = 0; k < weights.size(); ++k) opt.precond[k] = 1.0 / weights[k];
    opt.on_accept = [&](int, double energy, double) { res.energy_trace.push_back(energy); };

    auto eval = [&](const std::vector<double>& x, std::vector<double>& grad) {
        set_free_dofs(field, x);
        return energy_value_and_gradient(field, config.delta, grad);
    };

    const int probe_ring = std::max(1, (3 * config.Nr) / 4);
    auto record_probe = [&] {
        try {
            res.winding_probes.push_back(winding_number(ring_trace(field, probe_ring)));
        } catch (const std::exception&) {
            // modulus dipped below 1/2 somewhere on the probe circle: skip
        }
    };

    std::vector<double> x = get_free_dofs(field);
    int total_iters = 0;
    bool converged = false;
    double grad_sup = 0.0;
    while (total_iters < config.max_iters) {
        opt.max_iters = std::min(config.symmetrize_every, config.max_iters - total_iters);
        const LbfgsResult r = lbfgs_minimize(std::move(x), eval, opt);
        total_iters += r.iterations;
        set_free_dofs(field, r.x);
        grad_sup = r.grad_sup;
        if (r.line_search_failed) {
            res.field = field;
            res.breakdown = energy_E(field, config.delta);
            res.iterations = total_iters;
            res.final_gradient_norm = r.grad_sup;
            throw SolveFailure("line-search failure", std::move(res));
        }
        project_reflection(field);
        pin_boundary();
        record_probe();
        x = get_free_dofs(field);
        if (r.converged) {
            // Reached tolerance; confirm it still holds after the projection.
            std::vector<double> g;
            const double e = energy_value_and_gradient(field, config.delta, g);
            (void)e;
            grad_sup = 0.0;
            for (double v : g) grad_sup = std::max(grad_sup, std::abs(v));
            if (grad_sup <= config.tol || r.iterations == 0) {
                converged = grad_sup <= config.tol;
                break;
            }
        }
    }

    res.field = field;
    res.breakdown = energy_E(field, config.delta);
    res.iterations = total_iters;
    res.final_gradient_norm = grad_sup;
    res.converged = converged;
    return res;
}

std::vector<SolveResult> continuation_delta(const std::vector<double>& delta_list,
                                            SolveConfig base) {
    if (delta_list.empty()) throw std::invalid_argument("empty delta list");
    for (size_t k = 0; k + 1 < delta_list.size(); ++k)
        if (!(delta_list[k] < delta_list[k + 1]))
            throw std::invalid_argument("delta list must be ascending");

    std::vector<SolveResult> out;
    for (double delta : delta_list) {
        SolveConfig cfg = base;
        cfg.delta = delta;
        const Field2D* warm = out.empty() ? nullptr : &out.back().field;
        try {
            out.push_back(minimize_2d(cfg, warm));
        } catch (SolveFailure& f) {
            std::ostringstream msg;
            msg << f.what() << " at delta=" << delta;
            throw SolveFailure(msg.str(), std::move(f.best));
        }
    }
    return out;
}

std::string result_summary_json(const SolveConfig& config, const SolveResult& result,
                                double elapsed_seconds) {
    nlohmann::json j;
    j["config"] = {{"d", config.cls.d},
                   {"sign", to_string(config.cls.sign)},
                   {"delta", config.delta},
                   {"R", config.R},
                   {"Nr", config.Nr},
                   {"Ntheta", config.Ntheta},
                   {"tol", config.tol},
                   {"max_iters", config.max_iters},
                   {"symmetrize_every", config.symmetrize_every}};
    j["energy"] = {{"dirichlet", result.breakdown.dirichlet},
                   {"div_term", result.breakdown.div_term},
                   {"potential", result.breakdown.potential},
                   {"total", result.breakdown.total},
                   {"W_mass", 2.0 * result.breakdown.potential}};
    j["boundary_C"] = result.boundary_C;
    j["iterations"] = result.iterations;
    j["final_gradient_norm"] = result.final_gradient_norm;
    j["converged"] = result.converged;
    j["winding_probes"] = result.winding_probes;
    const ThresholdRecord rec = delta0(config.cls.d);
    j["delta0"] = rec.delta0;
    j["in_threshold_region"] = config.delta < rec.delta0;
    j["elapsed_seconds"] = elapsed_seconds;
    return j.dump(2) + "\n";
}

}  // namespace agl
