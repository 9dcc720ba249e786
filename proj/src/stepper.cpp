#include "fluctsel/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fluctsel/errors.hpp"

namespace fluctsel {

namespace {

constexpr std::size_t kMaxTableEntries = 64u << 20;  // doubles

double sum(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc;
}

}  // namespace

TridiagonalSolver::TridiagonalSolver(std::size_t n, double diag, double off)
    : off_(off), inv_pivot_(n), upper_(n) {
    double pivot = diag;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) pivot = diag - off * upper_[i - 1];
        if (pivot == 0.0) throw NumericalError("tridiagonal: zero pivot");
        inv_pivot_[i] = 1.0 / pivot;
        upper_[i] = off * inv_pivot_[i];
    }
}

void TridiagonalSolver::solve(std::span<double> rhs) const {
    const std::size_t n = rhs.size();
    if (n == 0) return;
    rhs[0] *= inv_pivot_[0];
    for (std::size_t i = 1; i < n; ++i) {
        rhs[i] = (rhs[i] - off_ * rhs[i - 1]) * inv_pivot_[i];
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= upper_[i] * rhs[i + 1];
}

ImexStepper::ImexStepper(SimulationGrid grid, EnvironmentModel model, double dt,
                         std::size_t steps_per_period)
    : grid_(std::move(grid)),
      model_(std::move(model)),
      dt_(dt),
      steps_per_period_(steps_per_period),
      xs_(grid_.nodes()) {
    validate(grid_);
    if (!(dt_ > 0.0)) throw ValidationError("stepper: dt must be positive");
    const double dx = grid_.dx();
    const double ratio = grid_.sigma * dt_ / (dx * dx);
    if (grid_.scheme == TimeScheme::backward_euler) {
        solver_ = TridiagonalSolver(grid_.nx, 1.0 + 2.0 * ratio, -ratio);
    } else {
        cn_ratio_ = 0.5 * ratio;
        solver_ = TridiagonalSolver(grid_.nx, 1.0 + 2.0 * cn_ratio_, -cn_ratio_);
    }
    std::size_t entries = 0;
    if (model_.time_independent()) {
        entries = 1;
    } else if (steps_per_period_ > 0) {
        entries = steps_per_period_;
    }
    const std::size_t per_entry = grid_.nx * (grid_.scheme == TimeScheme::crank_nicolson ? 2 : 1);
    if (entries * per_entry <= kMaxTableEntries) {
        table_.resize(entries);
        table_ready_.assign(entries, false);
    }
    work_.resize(grid_.nx);
}

void ImexStepper::compute_factors(std::size_t step, StepFactors& out) const {
    const std::size_t nx = grid_.nx;
    const double t = dt_ * static_cast<double>(step);
    out.first.resize(nx);
    if (grid_.scheme == TimeScheme::backward_euler) {
        model_.rate_profile(t, xs_, out.first);
        out.max_abs_rate = 0.0;
        for (double a : out.first) out.max_abs_rate = std::max(out.max_abs_rate, std::abs(a));
        return;
    }
    const double h = 0.5 * dt_;
    std::vector<double> a0(nx), a1(nx), a2(nx);
    model_.rate_profile(t, xs_, a0);
    model_.rate_profile(t + h, xs_, a1);
    model_.rate_profile(t + dt_, xs_, a2);
    out.second.resize(nx);
    out.max_abs_rate = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        out.first[i] = std::exp(0.5 * h * (a0[i] + a1[i]));
        out.second[i] = std::exp(0.5 * h * (a1[i] + a2[i]));
        out.max_abs_rate = std::max({out.max_abs_rate, std::abs(a0[i]), std::abs(a1[i])});
    }
}

const ImexStepper::StepFactors& ImexStepper::factors(std::size_t step) {
    if (!table_.empty()) {
        const std::size_t key = table_.size() == 1 ? 0 : step % table_.size();
        if (!table_ready_[key]) {
            compute_factors(key, table_[key]);
            table_ready_[key] = true;
        }
        return table_[key];
    }
    compute_factors(step, scratch_);
    return scratch_;
}

void ImexStepper::diffuse(std::span<double> n) {
    if (grid_.scheme == TimeScheme::crank_nicolson) {
        const std::size_t nx = n.size();
        const double r = cn_ratio_;
        for (std::size_t i = 0; i < nx; ++i) {
            const double left = i > 0 ? n[i - 1] : 0.0;
            const double right = i + 1 < nx ? n[i + 1] : 0.0;
            work_[i] = (1.0 - 2.0 * r) * n[i] + r * (left + right);
        }
        std::copy(work_.begin(), work_.end(), n.begin());
    }
    solver_.solve(n);
}

StepReport ImexStepper::advance(std::span<double> n, std::size_t step, bool coupled) {
    if (n.size() != grid_.nx) throw ValidationError("stepper: field size does not match grid");
    const StepFactors& f = factors(step);
    const double dx = grid_.dx();
    StepReport rep;

    const double mass0 = sum(n) * dx;
    if (!std::isfinite(mass0)) {
        std::ostringstream msg;
        msg << "stepper: non-finite density at t = " << dt_ * static_cast<double>(step);
        throw NumericalError(msg.str());
    }

    if (grid_.scheme == TimeScheme::backward_euler) {
        const double rho = coupled ? mass0 : 0.0;
        if (dt_ * (f.max_abs_rate + rho) >= 1.0) {
            std::ostringstream msg;
            msg << "step_imex: dt * (max|a| + rho) = " << dt_ * (f.max_abs_rate + rho)
                << " violates the reaction stability bound (< 1)";
            throw ValidationError(msg.str());
        }
        double grown = 0.0;
        for (std::size_t i = 0; i < n.size(); ++i) {
            const double base = n[i];
            grown += base * (1.0 + dt_ * f.first[i]);
            n[i] = base * (1.0 + dt_ * (f.first[i] - rho));
        }
        if (mass0 > 0.0) rep.reaction_log_growth = std::log(grown * dx / mass0);
        solver_.solve(n);
    } else {
        // Reaction half step on [t, t + dt/2]: n <- n E / (1 + K), where K
        // is the trapezoid integral of the mass of n E over the half step.
        const double h = 0.5 * dt_;
        auto react = [&](const std::vector<double>& e) {
            const double m_start = sum(n) * dx;
            double m_end = 0.0;
            for (std::size_t i = 0; i < n.size(); ++i) {
                n[i] *= e[i];
                m_end += n[i];
            }
            m_end *= dx;
            if (m_start > 0.0) rep.reaction_log_growth += std::log(m_end / m_start);
            if (coupled) {
                const double scale = 1.0 / (1.0 + 0.5 * h * (m_start + m_end));
                for (double& v : n) v *= scale;
            }
        };
        react(f.first);
        diffuse(n);
        react(f.second);
    }

    double clipped = 0.0;
    for (double& v : n) {
        if (v < 0.0) {
            clipped -= v;
            v = 0.0;
        } else if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "stepper: non-finite density after step at t = "
                << dt_ * static_cast<double>(step + 1);
            throw NumericalError(msg.str());
        }
    }
    rep.clipped_mass = clipped * dx;
    return rep;
}

DensityField step_imex(const DensityField& field, const SimulationGrid& grid,
                       const EnvironmentModel& model) {
    SimulationGrid g = grid;
    g.scheme = TimeScheme::backward_euler;
    DensityField out = field;
    // The stepper indexes steps from t = 0; use a one-off stepper whose
    // step 0 sits at the field's time.
    EnvironmentModel shifted_time = EnvironmentModel::custom(
        model.period(), [model, t0 = field.time](double t, double x) { return model.rate(t + t0, x); });
    ImexStepper local(g, field.time == 0.0 ? model : shifted_time, g.dt);
    local.advance(out.values, 0, true);
    out.time = field.time + g.dt;
    return out;
}

}  // namespace fluctsel
