#pragma once

#include "chopf/structure.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>

namespace chopf {

// Linear endomorphism stored as a table of basis images for every word up to
// `degree` (at most the structure's cap). Extends linearly.
class LinMap {
public:
    LinMap(HopfStructure structure, std::size_t degree, std::string name,
           const std::function<Elem(const Word&)>& basis_image);

    const HopfStructure& structure() const noexcept { return structure_; }
    std::size_t degree() const noexcept { return degree_; }
    const std::string& name() const noexcept { return name_; }
    const std::map<Word, Elem>& images() const noexcept { return images_; }

    // Throws DegreeCapExceeded past the tabulated degree.
    const Elem& image(const Word& w) const;
    Elem apply(const Elem& a) const;

    // True when every basis image is homogeneous of the same degree as its word.
    bool preserves_degree() const;

    friend bool operator==(const LinMap& a, const LinMap& b) {
        return a.structure_ == b.structure_ && a.degree_ == b.degree_ && a.images_ == b.images_;
    }

private:
    HopfStructure structure_;
    std::size_t degree_;
    std::string name_;
    std::map<Word, Elem> images_;
};

Elem linmap_apply(const LinMap& f, const Elem& a);

LinMap identity_map(const HopfStructure& h, std::size_t degree);
LinMap closed_antipode_map(const HopfStructure& h, std::size_t degree);

// w -> eps(w) * unit: the convolution identity, a.k.a. the unit impulse.
LinMap conv_unit(const HopfStructure& h, std::size_t degree);
LinMap conv_unit(const HopfStructure& h);

// f * g = m (f (x) g) Delta. Throws StructureMismatch when f and g disagree on
// structure or tabulated degree.
LinMap convolve(const LinMap& f, const LinMap& g);

// Convolution inverse of the identity, solved degree by degree:
// S(e) = e and S(w) = -sum m(w1, S(w2)) over the coproduct terms with w1 != e.
LinMap antipode_solve(const HopfStructure& h, std::size_t degree);
LinMap antipode_solve(const HopfStructure& h);

enum class CoherenceSide {
    IdTensorS, // m (id (x) S) Delta
    STensorId, // m (S (x) id) Delta
};

// Residuals of m (id (x) S) Delta (w) - u eps (w) per basis word. Only nonzero
// residuals are stored; pass holds exactly when none are.
struct CoherenceReport {
    explicit CoherenceReport(Alphabet a) : alphabet(std::move(a)) {}

    Alphabet alphabet;
    std::size_t words_checked = 0;
    std::map<Word, Elem> defects;
    std::optional<std::size_t> lowest_defect_degree;
    std::optional<std::size_t> max_defect_degree;
    Rational max_defect = 0; // largest l1 norm among the residuals
    bool pass = true;
};

CoherenceReport coherence_check(const HopfStructure& h, const LinMap& antipode, std::size_t max_degree,
                                CoherenceSide side = CoherenceSide::IdTensorS);

// Single-word residual, exposed for the path comparisons.
Elem coherence_residual(const HopfStructure& h, const LinMap& antipode, const Word& w,
                        CoherenceSide side = CoherenceSide::IdTensorS);

std::string summary(const CoherenceReport& report);

} // namespace chopf
