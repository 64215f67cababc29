#include "twc/intlinalg.hpp"

namespace twc {

template SmithDecomposition<BigInt> smith_normal_form<BigInt>(const Mat<BigInt>&);
template SolutionSet<BigInt> solve_linear<BigInt>(const Mat<BigInt>&, const Vec<BigInt>&);
template BigInt determinant<BigInt>(const Mat<BigInt>&);

}  // namespace twc
