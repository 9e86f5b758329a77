#include "optivmd/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace optivmd {

namespace {
// FFTW plan creation is not thread-safe; execution of distinct plans is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

cvec transform(const cvec& in, int sign) {
    const int n = static_cast<int>(in.size());
    cvec out(in.size());
    if (n == 0) return out;
    cvec buf(in);
    fftw_plan plan;
    {
        std::lock_guard lock(plan_mutex());
        plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf.data()),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(plan_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}
}  // namespace

cvec fft(const cvec& in) { return transform(in, FFTW_FORWARD); }

cvec ifft(const cvec& in) {
    cvec out = transform(in, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(in.size());
    for (auto& v : out) v *= scale;
    return out;
}

cvec fft_real(const std::vector<double>& in) {
    cvec c(in.size());
    for (size_t i = 0; i < in.size(); ++i) c[i] = in[i];
    return fft(c);
}

}  // namespace optivmd
