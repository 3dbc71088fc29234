#include "kspap/pap_signal.hpp"

namespace kspap {

double ergodic_mean_table(const std::vector<double>& times, const std::vector<double>& norms,
                          double L) {
    if (times.size() != norms.size() || times.size() < 2)
        throw std::invalid_argument("ergodic_mean_table: bad table");
    if (times.front() > -L + 1e-9 || times.back() < L - 1e-9)
        throw std::invalid_argument("ergodic_mean_table: table does not cover [-L, L]");
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        double a = times[i], b = times[i + 1];
        if (b <= -L || a >= L) continue;
        double fa = norms[i], fb = norms[i + 1];
        // clip the first/last panel to the window by linear interpolation
        if (a < -L) {
            fa += (fb - fa) * (-L - a) / (b - a);
            a = -L;
        }
        if (b > L) {
            fb = norms[i] + (norms[i + 1] - norms[i]) * (L - times[i]) / (times[i + 1] - times[i]);
            b = L;
        }
        integral += 0.5 * (fa + fb) * (b - a);
    }
    return integral / (2.0 * L);
}

}  // namespace kspap
