#include "purt/panel.hpp"

#include <algorithm>
#include <set>

#include "purt/errors.hpp"

namespace purt {

const char* to_string(Variable v) noexcept {
    return v == Variable::cpi ? "cpi" : "rate";
}

Variable variable_from_string(const std::string& s) {
    if (s == "cpi") return Variable::cpi;
    if (s == "rate") return Variable::rate;
    throw SchemaError("unknown variable '" + s + "' (expected cpi or rate)");
}

Panel::Panel(std::vector<std::string> units, std::vector<MonthIndex> times)
    : units_(std::move(units)), times_(std::move(times)),
      cells_(units_.size() * times_.size()) {}

const std::optional<double>& Panel::at(std::size_t unit, std::size_t time) const {
    return cells_.at(unit * times_.size() + time);
}

void Panel::set(std::size_t unit, std::size_t time, double value) {
    cells_.at(unit * times_.size() + time) = value;
}

void Panel::clear(std::size_t unit, std::size_t time) {
    cells_.at(unit * times_.size() + time).reset();
}

std::size_t Panel::unit_index(const std::string& unit) const {
    auto it = std::find(units_.begin(), units_.end(), unit);
    if (it == units_.end()) throw DataError("unit '" + unit + "' not in panel");
    return static_cast<std::size_t>(it - units_.begin());
}

bool Panel::has_unit(const std::string& unit) const noexcept {
    return std::find(units_.begin(), units_.end(), unit) != units_.end();
}

bool Panel::balanced() const noexcept {
    return std::all_of(cells_.begin(), cells_.end(),
                       [](const std::optional<double>& c) { return c.has_value(); });
}

std::vector<double> Panel::row(std::size_t unit) const {
    std::vector<double> out;
    out.reserve(times_.size());
    for (std::size_t t = 0; t < times_.size(); ++t) {
        const auto& cell = at(unit, t);
        if (!cell) {
            throw UnbalancedError("unit '" + units_.at(unit) + "' is missing " +
                                  times_[t].str());
        }
        out.push_back(*cell);
    }
    return out;
}

Panel Panel::without_unit(const std::string& unit) const {
    const std::size_t drop = unit_index(unit);
    std::vector<std::string> kept;
    kept.reserve(units_.size() - 1);
    for (std::size_t i = 0; i < units_.size(); ++i) {
        if (i != drop) kept.push_back(units_[i]);
    }
    Panel out(std::move(kept), times_);
    std::size_t r = 0;
    for (std::size_t i = 0; i < units_.size(); ++i) {
        if (i == drop) continue;
        for (std::size_t t = 0; t < times_.size(); ++t) {
            if (at(i, t)) out.set(r, t, *at(i, t));
        }
        ++r;
    }
    return out;
}

Panel align_panel(const std::vector<RawSeries>& series, Variable variable,
                  const Window& window) {
    std::vector<const RawSeries*> selected;
    std::vector<std::string> units;
    for (const auto& s : series) {
        if (s.variable != variable) continue;
        if (std::find(units.begin(), units.end(), s.unit) != units.end()) {
            throw DataError("unit '" + s.unit + "' appears twice for variable " +
                            to_string(variable));
        }
        selected.push_back(&s);
        units.push_back(s.unit);
    }
    if (selected.empty()) {
        throw DataError(std::string("no series of variable ") + to_string(variable));
    }

    std::set<MonthIndex> axis;
    for (const auto* s : selected) {
        for (const auto& o : s->obs) {
            if (window.contains(o.t)) axis.insert(o.t);
        }
    }
    for (const auto* s : selected) {
        const bool any = std::any_of(s->obs.begin(), s->obs.end(), [&](const Observation& o) {
            return window.contains(o.t);
        });
        if (!any) {
            throw DataError("unit '" + s->unit + "' has no observations inside the window");
        }
    }

    Panel panel(std::move(units), std::vector<MonthIndex>(axis.begin(), axis.end()));
    for (std::size_t i = 0; i < selected.size(); ++i) {
        for (const auto& o : selected[i]->obs) {
            if (!window.contains(o.t)) continue;
            const auto pos = std::lower_bound(panel.times().begin(), panel.times().end(), o.t);
            panel.set(i, static_cast<std::size_t>(pos - panel.times().begin()), o.value);
        }
    }
    return panel;
}

const Panel& require_balanced(const Panel& panel) {
    for (std::size_t i = 0; i < panel.n_units(); ++i) {
        for (std::size_t t = 0; t < panel.n_times(); ++t) {
            if (!panel.at(i, t)) {
                throw UnbalancedError("panel is unbalanced: unit '" + panel.units()[i] +
                                      "' is missing " + panel.times()[t].str());
            }
        }
    }
    return panel;
}

Eigen::MatrixXd to_matrix(const Panel& panel) {
    require_balanced(panel);
    Eigen::MatrixXd m(panel.n_units(), panel.n_times());
    for (std::size_t i = 0; i < panel.n_units(); ++i) {
        for (std::size_t t = 0; t < panel.n_times(); ++t) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = *panel.at(i, t);
        }
    }
    return m;
}

}  // namespace purt
