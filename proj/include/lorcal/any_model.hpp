#pragma once

// Run-time choice of model, addressed with the Event variant. Used by the
// scenario runner; mismatched event kinds raise RepresentationError.

#include <string>
#include <variant>

#include "lorcal/causal_dag.hpp"
#include "lorcal/cylinder.hpp"
#include "lorcal/minkowski.hpp"
#include "lorcal/space.hpp"

namespace lorcal {

class AnyModel {
private:
    template <class F>
    auto apply(const Event& a, const Event& b, F&& f) const {
        return std::visit(
            [&](const auto& m) {
                using E = typename std::decay_t<decltype(m)>::event_type;
                const E* x = std::get_if<E>(&a);
                const E* y = std::get_if<E>(&b);
                if (!x || !y) throw RepresentationError("event representation does not match the " + kind() + " model");
                return f(m, *x, *y);
            },
            m_);
    }

public:
    using Variant = std::variant<MinkowskiStrip, Cylinder, CausalDag>;

    AnyModel(MinkowskiStrip m) : m_(std::move(m)) {}
    AnyModel(Cylinder m) : m_(std::move(m)) {}
    AnyModel(CausalDag m) : m_(std::move(m)) {}

    const Variant& variant() const noexcept { return m_; }
    bool continuum() const noexcept { return !std::holds_alternative<CausalDag>(m_); }

    std::string kind() const {
        return std::visit(
            [](const auto& m) -> std::string {
                using M = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<M, MinkowskiStrip>) return "minkowski";
                else if constexpr (std::is_same_v<M, Cylinder>) return "cylinder";
                else return "dag";
            },
            m_);
    }

    double d(const Event& a, const Event& b) const {
        return apply(a, b, [](const auto& m, const auto& x, const auto& y) { return m.d(x, y); });
    }
    bool causal(const Event& a, const Event& b) const {
        return apply(a, b, [](const auto& m, const auto& x, const auto& y) { return m.causal(x, y); });
    }
    bool chrono(const Event& a, const Event& b) const {
        return apply(a, b, [](const auto& m, const auto& x, const auto& y) { return m.chrono(x, y); });
    }
    double tau(const Event& a, const Event& b) const {
        return apply(a, b, [](const auto& m, const auto& x, const auto& y) { return m.tau(x, y); });
    }
    double comparisonRadius() const {
        return std::visit([](const auto& m) { return m.comparisonRadius(); }, m_);
    }

    bool diamondContains(const Diamond<Event>& dia, const Event& e) const {
        if (dia.kind == DiamondKind::Open) return chrono(dia.lo, e) && chrono(e, dia.hi);
        return causal(dia.lo, e) && causal(e, dia.hi);
    }

private:
    Variant m_;
};

}  // namespace lorcal
