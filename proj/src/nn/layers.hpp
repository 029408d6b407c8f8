#pragma once

#include <string>
#include <vector>

#include "core/rng.hpp"
#include "core/tensor.hpp"
#include "nn/param.hpp"

namespace wsod::nn {

// 3x3 convolution, padding 1, stride 1 or 2.
struct Conv3x3 {
    int in_c = 0, out_c = 0, stride = 1;
    std::vector<double> w;  // [out_c][in_c][3][3]
    std::vector<double> b;  // [out_c]

    Conv3x3() = default;
    Conv3x3(int in_channels, int out_channels, int stride_ = 1);

    void init_he(Rng& rng, double gain = 1.0);
    Tensor3 forward(const Tensor3& in) const;
    // gout is the gradient at the output; gradients for w/b are accumulated
    // into gw/gb (shaped like w/b); returns the gradient at the input.
    Tensor3 backward(const Tensor3& in, const Tensor3& gout, std::vector<double>& gw,
                     std::vector<double>& gb) const;

    void collect_params(const std::string& prefix, std::vector<ParamRef>& out);
};

Tensor3 relu(const Tensor3& x);
// gin = gout where the forward output was positive
Tensor3 relu_backward(const Tensor3& out, const Tensor3& gout);

std::vector<double> global_avg_pool(const Tensor3& x);
Tensor3 global_avg_pool_backward(const std::vector<double>& gpooled, int c, int h, int w);

Map2D sigmoid(const Map2D& logits);
// dL/dlogit = dL/dout * out * (1 - out)
Map2D sigmoid_backward(const Map2D& out, const Map2D& gout);

Tensor3 upsample_bilinear(const Tensor3& in, int oh, int ow);
// transpose of upsample_bilinear: routes output gradients back to the inputs
Tensor3 upsample_bilinear_backward(const Tensor3& gout, int ih, int iw);

Tensor3 concat_channels(const std::vector<const Tensor3*>& parts);
std::vector<Tensor3> split_channels(const Tensor3& g, const std::vector<int>& channel_counts);

}  // namespace wsod::nn
