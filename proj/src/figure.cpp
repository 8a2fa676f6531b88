#include "tcentroid/figure.hpp"

#include <fstream>
#include <ostream>

#include "tcentroid/errors.hpp"
#include "tcentroid/format.hpp"
#include "tcentroid/special_functions.hpp"

namespace tcentroid::figure {

namespace {

double masked_density(double x, double center, double sigma, const ExcludedInterval& hole) {
    if (x > hole.lower && x < hole.upper) {
        return 0.0;
    }
    return special::std_pdf((x - center) / sigma) / sigma;
}

}  // namespace

Data figure1_data() {
    Data data;
    data.rows.reserve(static_cast<std::size_t>(kLastIndex - kFirstIndex + 1));
    for (int i = kFirstIndex; i <= kLastIndex; ++i) {
        const double x = static_cast<double>(i) / kGridScale;
        data.rows.push_back({x, masked_density(x, kParams.mu, kParams.sigma, kHole),
                             masked_density(x, kParams.mu + kShift, kParams.sigma, kHole)});
    }
    const ShiftComparison cmp = shift_comparison(kParams, kHole, kShift);
    data.base_centroid = cmp.base.value;
    data.shifted_centroid = cmp.shifted.value;
    return data;
}

void write_figure1_csv(std::ostream& out, const Data& data) {
    out << "x,fX_masked,fY_masked\n";
    for (const Row& r : data.rows) {
        out << format_double(r.x) << ',' << format_double(r.fx_masked) << ','
            << format_double(r.fy_masked) << '\n';
    }
    out << "centroid," << format_double(data.base_centroid) << ','
        << format_double(data.shifted_centroid) << '\n';
}

void reproduce_figure1(const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    write_figure1_csv(file, figure1_data());
    if (!file) {
        throw Error("failed writing " + path.string());
    }
}

}  // namespace tcentroid::figure
