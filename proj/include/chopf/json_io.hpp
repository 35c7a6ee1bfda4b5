#pragma once

#include "chopf/convolution.hpp"
#include "chopf/markov.hpp"
#include "chopf/transformer.hpp"

#include <json.hpp>

#include <string>

namespace chopf {

// Key order is part of the output contract, so everything uses ordered_json.
using Json = nlohmann::ordered_json;

// {"alphabet":"ab","terms":[{"word":"aabb","coeff":"4"}, ...]}
Json to_json(const Elem& a);
Elem elem_from_json(const Json& j);

// {"alphabet":"ab","terms":[{"left":"a","right":"b","coeff":"1"}, ...]}
Json to_json(const TensorElem& t);
TensorElem tensor_from_json(const Json& j);

// {"pass":false,"defects":[{"word":"a","residual":{...}}]}
Json to_json(const CoherenceReport& r);
CoherenceReport report_from_json(const Json& j);

// {"states":["abc",...],"P":[["1/2",...],...]} plus "arity" when known.
Json to_json(const MarkovChain& c);
MarkovChain chain_from_json(const Json& j);

// {"eigenvalues":[{"value":"1/2","multiplicity":3}],"stationary":["1/6",...],
//  "characteristicPolynomial":[...],"residualFactor":[...]}
Json to_json(const Spectrum& s);
Spectrum spectrum_from_json(const Json& j);

Json to_json(const QMatrix& m);
QMatrix qmatrix_from_json(const Json& j);

// Nested row arrays of numbers.
Json to_json(const toy::Matrix& m);
toy::Matrix matrix_from_json(const Json& j);

// Checkpoint: dims, seed, and every matrix as a flat row-major array.
Json to_json(const toy::ToyModel& m, const std::string& alphabet = {});
toy::ToyModel model_from_json(const Json& j);

Json to_json(const toy::PsdReport& r);
toy::PsdReport psd_report_from_json(const Json& j);

// {"distribution":[...],"squarings":4,"spread":1e-13}
Json to_json(const SquaringResult& r);
SquaringResult squaring_from_json(const Json& j);

// Throws Error when the file is unreadable and ParseError when it is not JSON.
Json read_json_file(const std::string& path);

// One training-log line.
Json epoch_record(std::size_t epoch, double defect, double cross_entropy);

} // namespace chopf
