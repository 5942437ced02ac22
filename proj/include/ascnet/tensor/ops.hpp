#pragma once

#include <optional>
#include <vector>

#include "ascnet/tensor/tensor.hpp"

// Differentiable operations. Every op validates shapes up front and throws
// ShapeError naming the offending shapes.
namespace ascnet::tensor {

// ---- linear algebra ---------------------------------------------------------

// [n,k] x [k,m] -> [n,m]
Tensor matmul(const Tensor& a, const Tensor& b);
// x[n,m] + b[m] broadcast over rows.
Tensor add_bias(const Tensor& x, const Tensor& b);
// y = xW (+ b). The bias is optional: the voting head has none.
Tensor dense(const Tensor& x, const Tensor& w, const std::optional<Tensor>& b = std::nullopt);

// ---- elementwise ------------------------------------------------------------

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& x, double s);
Tensor add_scalar(const Tensor& x, double s);
Tensor tanh(const Tensor& x);
Tensor sigmoid(const Tensor& x);

// Normalizes along `axis` with max subtraction.
Tensor softmax(const Tensor& x, std::size_t axis);

// ---- structure --------------------------------------------------------------

Tensor reshape(const Tensor& x, Shape shape);
// Picks `index` along `axis` and drops that axis.
Tensor select(const Tensor& x, std::size_t axis, std::size_t index);
// Mean along `axis`, dropping it.
Tensor mean(const Tensor& x, std::size_t axis);
Tensor sum_all(const Tensor& x);
Tensor mean_all(const Tensor& x);
// Concatenation along `axis`; all other extents must agree.
Tensor concat(const std::vector<Tensor>& parts, std::size_t axis);

// ---- sequence layers --------------------------------------------------------

// Gathers rows of table[V,d]. Id 0 is padding and always yields the zero
// vector (and never receives gradient). Rows accumulate gradient only when
// `trainable` and the table itself requires grad.
Tensor embedding_lookup(const Tensor& table, const std::vector<std::size_t>& ids, bool trainable);

// One GRU direction. Gate blocks are laid out [update | reset | candidate]
// along the last axis:
//   z  = sigmoid(x Wz + h Uz + bz)
//   r  = sigmoid(x Wr + h Ur + br)
//   h~ = tanh(x Wh + (r * h) Uh + bh)
//   h' = (1 - z) * h + z * h~
struct GruParams {
  Tensor w;  // [d_in, 3h]
  Tensor u;  // [h, 3h]
  Tensor b;  // [3h]
};

// x[T,d_in] -> [T,h]; `reverse` reads the sequence back to front and
// returns states aligned with input positions.
Tensor gru(const Tensor& x, const GruParams& p, bool reverse);
// x[T,d_in] -> [T,2h]: forward state and backward state per position.
Tensor bi_gru(const Tensor& x, const GruParams& forward, const GruParams& backward);

struct ConvBank {
  std::size_t width = 1;
  Tensor kernel;  // [width*D, F]
  Tensor bias;    // [F]
};

// Valid 1-D convolution over time of H[T,D] per bank, max over time per
// filter, concatenated over banks -> [sum F]. Max ties go to the lowest
// time index.
Tensor conv_maxpool(const Tensor& h, const std::vector<ConvBank>& banks);

// ---- losses (scalar outputs, mean over rows) --------------------------------

// -mean_rows sum_c y log p. p rows are probabilities, y is one-hot.
Tensor cross_entropy(const Tensor& p, const Tensor& y_onehot);
Tensor mse(const Tensor& pred, const Tensor& target);

inline constexpr double kTanimotoEpsilon = 1e-7;
// 1 - y.p / (||y + p||_1 - y.p + eps), averaged over rows.
Tensor tanimoto(const Tensor& pred, const Tensor& target, double eps = kTanimotoEpsilon);

}  // namespace ascnet::tensor
