#include "chopf/convolution.hpp"

#include <sstream>

namespace chopf {

LinMap::LinMap(HopfStructure structure, std::size_t degree, std::string name,
               const std::function<Elem(const Word&)>& basis_image)
    : structure_(std::move(structure)), degree_(degree), name_(std::move(name)) {
    structure_.require_degree(degree_);
    for (auto& w : words_up_to(structure_.alphabet(), degree_)) {
        Elem img = basis_image(w);
        img.require_same_alphabet(structure_.basis(Word()));
        images_.emplace(std::move(w), std::move(img));
    }
}

const Elem& LinMap::image(const Word& w) const {
    if (w.degree() > degree_) {
        throw DegreeCapExceeded(w.degree(), degree_);
    }
    return images_.at(w);
}

Elem LinMap::apply(const Elem& a) const {
    Elem out(structure_.alphabet());
    for (const auto& [w, c] : a.terms()) {
        out.add_scaled(image(w), c);
    }
    return out;
}

bool LinMap::preserves_degree() const {
    for (const auto& [w, img] : images_) {
        for (const auto& [v, c] : img.terms()) {
            if (v.degree() != w.degree()) {
                return false;
            }
        }
    }
    return true;
}

Elem linmap_apply(const LinMap& f, const Elem& a) { return f.apply(a); }

LinMap identity_map(const HopfStructure& h, std::size_t degree) {
    return LinMap(h, degree, "id", [&](const Word& w) { return h.basis(w); });
}

LinMap closed_antipode_map(const HopfStructure& h, std::size_t degree) {
    return LinMap(h, degree, "S", [&](const Word& w) { return h.antipode_closed(w); });
}

LinMap conv_unit(const HopfStructure& h, std::size_t degree) {
    return LinMap(h, degree, "u.eps", [&](const Word& w) { return h.unit(h.counit(h.basis(w))); });
}

LinMap conv_unit(const HopfStructure& h) { return conv_unit(h, h.max_degree()); }

LinMap convolve(const LinMap& f, const LinMap& g) {
    if (!(f.structure() == g.structure()) || f.degree() != g.degree()) {
        throw StructureMismatch();
    }
    const HopfStructure& h = f.structure();
    return LinMap(h, f.degree(), "(" + f.name() + " * " + g.name() + ")", [&](const Word& w) {
        Elem out(h.alphabet());
        for (const auto& [split, c] : h.coproduct(w).terms()) {
            out.add_scaled(h.product(f.image(split.first), g.image(split.second)), c);
        }
        return out;
    });
}

LinMap antipode_solve(const HopfStructure& h, std::size_t degree) {
    // Words arrive in canonical order, so every strictly shorter word is
    // already solved when w is reached.
    std::map<Word, Elem> solved;
    return LinMap(h, degree, "S", [&](const Word& w) {
        Elem s = h.unit(h.counit(h.basis(w)));
        for (const auto& [split, c] : h.coproduct(w).terms()) {
            if (split.first.empty()) {
                continue; // the e (x) w term carries S(w) itself with coefficient 1
            }
            s.add_scaled(h.product(h.basis(split.first), solved.at(split.second)), Rational(-c));
        }
        solved.emplace(w, s);
        return s;
    });
}

LinMap antipode_solve(const HopfStructure& h) { return antipode_solve(h, h.max_degree()); }

Elem coherence_residual(const HopfStructure& h, const LinMap& antipode, const Word& w, CoherenceSide side) {
    Elem lhs(h.alphabet());
    for (const auto& [split, c] : h.coproduct(w).terms()) {
        const Elem term = side == CoherenceSide::IdTensorS
                              ? h.product(h.basis(split.first), antipode.image(split.second))
                              : h.product(antipode.image(split.first), h.basis(split.second));
        lhs.add_scaled(term, c);
    }
    return lhs - h.unit(h.counit(h.basis(w)));
}

CoherenceReport coherence_check(const HopfStructure& h, const LinMap& antipode, std::size_t max_degree,
                                CoherenceSide side) {
    if (!(antipode.structure() == h)) {
        throw StructureMismatch();
    }
    h.require_degree(max_degree);
    CoherenceReport report(h.alphabet());
    for (const auto& w : words_up_to(h.alphabet(), max_degree)) {
        ++report.words_checked;
        Elem residual = coherence_residual(h, antipode, w, side);
        if (residual.is_zero()) {
            continue;
        }
        report.pass = false;
        if (!report.lowest_defect_degree) {
            report.lowest_defect_degree = w.degree();
        }
        report.max_defect_degree = w.degree();
        if (Rational norm = residual.l1_norm(); norm > report.max_defect) {
            report.max_defect = norm;
        }
        report.defects.emplace(w, std::move(residual));
    }
    return report;
}

std::string summary(const CoherenceReport& report) {
    std::ostringstream os;
    if (report.pass) {
        os << "PASS (" << report.words_checked << " basis words, max defect 0)";
    } else {
        os << "FAIL (" << report.words_checked << " basis words, " << report.defects.size()
           << " defective, lowest defective degree " << *report.lowest_defect_degree << ", max defect "
           << report.max_defect.get_str() << ")";
    }
    return os.str();
}

} // namespace chopf
