#ifndef PRIVLP_WATERMARK_HPP
#define PRIVLP_WATERMARK_HPP

#include <vector>

#include "privlp/probkit.hpp"

namespace privlp {

/// alpha is the correlation knob between the two cover images; 0 = the base
/// instance, 1 = identical images (square invertible leakage).
struct WatermarkParams {
    double alpha = 0.0;
};

struct WatermarkInstance {
    ProblemInstance instance;
    std::vector<int> kept_y;  // original Y indices retained after dropping zero-mass symbols
    bool reduced_square = false;  // alpha = 1 collapses to the 2x2 invertible case
    double alpha = 0.0;
};

/// The closed-form watermark family:
///   p_y      = [11a/100 + 107/300, 7a/50 + 59/150, 11(1-a)/100, 7(1-a)/50]
///   leakage  = [(9a+51)/(33a+107), (18a+42)/(21a+59), 3/11, 6/7] on row x=1.
/// Zero-mass Y symbols (alpha = 1) are dropped before instance construction.
/// The reference numbers for this family are in nats, hence the default base.
WatermarkInstance watermark_instance(const WatermarkParams& params,
                                     LogBase base = LogBase::Natural);

}  // namespace privlp

#endif  // PRIVLP_WATERMARK_HPP
