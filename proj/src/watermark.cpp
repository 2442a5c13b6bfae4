#include "privlp/watermark.hpp"

namespace privlp {

WatermarkInstance watermark_instance(const WatermarkParams& params, LogBase base) {
    const double a = params.alpha;
    if (a < 0.0 || a > 1.0) throw Error("alpha must lie in [0, 1]");

    Eigen::Vector4d py;
    py << 11.0 * a / 100.0 + 107.0 / 300.0, 7.0 * a / 50.0 + 59.0 / 150.0,
        11.0 * (1.0 - a) / 100.0, 7.0 * (1.0 - a) / 50.0;
    Eigen::Vector4d row1;
    row1 << (9.0 * a + 51.0) / (33.0 * a + 107.0), (18.0 * a + 42.0) / (21.0 * a + 59.0),
        3.0 / 11.0, 6.0 / 7.0;

    WatermarkInstance out;
    out.alpha = a;
    for (int y = 0; y < 4; ++y)
        if (py(y) > 1e-12) out.kept_y.push_back(y);
    const int ny = static_cast<int>(out.kept_y.size());
    out.reduced_square = ny == 2;

    Eigen::MatrixXd leak(2, ny);
    Eigen::VectorXd pyk(ny), yvals(ny);
    double mass = 0.0;
    for (int k = 0; k < ny; ++k) mass += py(out.kept_y[k]);
    for (int k = 0; k < ny; ++k) {
        const int y = out.kept_y[k];
        leak(0, k) = row1(y);
        leak(1, k) = 1.0 - row1(y);
        pyk(k) = py(y) / mass;  // mass is 1 up to roundoff; keep the sum exact
        yvals(k) = static_cast<double>(y + 1);
    }
    Eigen::VectorXd xvals(2);
    xvals << 1.0, 2.0;

    out.instance = ProblemInstance::create(Channel(std::move(leak)), Distribution(std::move(pyk)),
                                           xvals, yvals, base);
    return out;
}

}  // namespace privlp
