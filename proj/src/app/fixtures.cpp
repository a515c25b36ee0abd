#include "fracid/app/fixtures.hpp"

#include "fracid/errors.hpp"
#include "fracid/fotf/model_io.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fracid::app {

namespace {

const RationalOrder kQuarter{1, 4};

DiscreteFixture discrete(const char* label, int drop, int power, std::vector<double> num, std::vector<double> den) {
    return {label, drop, power, DiscreteTf(std::move(num), std::move(den), 0.1)};
}

FoFixture fo(const char* label, int drop, int power, std::vector<double> num, std::vector<double> den,
             std::array<double, 5> args, std::optional<std::string> note = std::nullopt) {
    return {label, drop, power, CommensurateFoTf::from_descending(kQuarter, num, den), args, std::move(note)};
}

FixtureBank build() {
    FixtureBank b;
    b.discrete = {
        discrete("G30_100", 30, 100, {-33.7, 48.94, -8.075, -1.686, -0.7376}, {1, -1.485, 0.5105, 0, 0, 0}),
        discrete("G30_90", 30, 90, {7.773, 0, 0, 0, 0, 0, 0}, {1, -1.994, 2.522, -2.848, 2.468, -1.682, 0.7502, -0.171}),
        discrete("G30_80", 30, 80, {-18.59, 29.22, -11.9, 16.78, -7.937, 3.413, -0.2431}, {1, -0.9305, 0, 0, 0, 0, 0, 0}),
        discrete("G30_70", 30, 70, {-30.44, 48.92, -14.66, -3.01, 7.914, -4.594, 1.306},
                 {1, -1.409, 0.5661, -0.1161, 0, 0, 0, 0}),
        discrete("G50_100", 50, 100, {-0.9878, 0, 0, 0, 0, 0, 0},
                 {1, -1.768, 0.8855, 0.2743, -1.02, 1.157, -0.6595, 0.1493}),
        discrete("G50_90", 50, 90, {1.273, 0, 0, 0, 0, 0, 0},
                 {1, -0.8116, -1.059, 1.324, -0.2336, -0.6179, 0.5881, -0.1622}),
        discrete("G50_80", 50, 80, {1.202, 0, 0, 0, 0, 0, 0},
                 {1, -1.025, -0.9189, 1.603, -0.4712, -0.4902, 0.4281, -0.09746}),
        discrete("G50_70", 50, 70, {-13.1, 4.059, 8.035, 3.931, -0.9597, 3.299, -2.081}, {1, -0.9154, 0, 0, 0, 0, 0, 0}),
    };

    // Coefficients from s^2.5 down to s^0.
    b.fo = {
        fo("G30_100", 30, 100,
           {442.8093, -3584.6003, 12929.3346, -27507.7124, 38563.6082, -37756.4006, 26716.4613, -13862.9884, 5205.5968,
            -1343.1001, 189.2362},
           {4.0473, -25.1112, 74.4725, -136.868, 175.4011, -166.332, 120.5556, -66.2508, 26.7975, -7.0595, 1},
           {30.7877, 34.0734, 45.0014, 53.9669, 87.4224}),
        fo("G30_90", 30, 90,
           {-51.2735, 412.3702, -1527.1234, 3359.9726, -4668.634, 3848.8028, -1100.2029, -1298.9864, 1707.7228,
            -852.8921, 171.3044},
           {14.2649, -78.4487, 186.3603, -241.2807, 175.715, -64.2108, 8.7947, -6.8852, 9.8484, -4.9694, 1},
           {22.8461, 26.2987, 30.4573, 44.9721, 140.7488}),
        fo("G30_80", 30, 80,
           {149.8262, -1337.0308, 5358.5713, -12740.6685, 20018.8426, -21943.9262, 17283.403, -9902.8347, 4073.4683,
            -1115.0882, 154.9787},
           {1.8404, -12.1146, 37.607, -73.2914, 102.1556, -109.157, 91.0873, -57.4605, 25.5829, -7.1556, 1},
           {25.8722, 27.4984, 37.0359, 45.1178, 94.2025}),
        fo("G30_70", 30, 70,
           {89.9109, -846.0716, 3584.1383, -9003.7538, 14897.4822, -17095.4976, 13995.0615, -8277.9642, 3492.1868,
            -968.8845, 133.1494},
           {0.16026, -1.4727, 6.8837, -20.9657, 44.6741, -67.554, 71.8732, -52.4714, 25.1083, -7.2106, 1},
           {26.8784, 27.2783, 27.5585, 45.0566, 71.4097}),
        fo("G50_100", 50, 100,
           {18.416, -171.2393, 724.5365, -1843.103, 3145.2927, -3813.3739, 3393.7524, -2241.2139, 1070.7003, -335.5444,
            51.8497},
           {2.2383, -12.562, 30.4049, -41.347, 38.0912, -34.1689, 36.7103, -33.2323, 19.3428, -6.3842, 1},
           {22.6624, 26.0995, 33.2098, 44.9379, 127.6716}),
        fo("G50_90", 50, 90,
           {35.2472, -315.5662, 1284.5154, -3133.4332, 5090.714, -5798.5053, 4750.6803, -2818.5909, 1186.9863,
            -327.4343, 45.4763},
           {0.99301, -5.9022, 17.8417, -37.2445, 60.5457, -77.8108, 76.1043, -53.4213, 25.1562, -7.1464, 1},
           {22.5402, 32.4109, 44.1681, 45.0754, 98.8554}),
        fo("G50_80", 50, 80,
           {26.6578, -244.6936, 1020.4001, -2545.0691, 4215.341, -4878.1213, 4048.84, -2432.2661, 1040.2897, -292.7986,
            41.4599},
           {0.65703, -5.0526, 18.5352, -42.5015, 68.4999, -82.6806, 76.1678, -51.9011, 24.3433, -7.0195, 1},
           {22.5958, 23.3214, 38.4981, 45.1169, 89.3358},
           "several printed coefficients lack a decimal point; stored values are the most plausible readings "
           "(1020.4001, 2545.0691, 4048.84, 2432.2661, 18.5352, 42.5015, 76.1678, 51.9011)"),
        fo("G50_70", 50, 70,
           {31.2553, -290.6344, 1210.6045, -2973.7433, 4783.2853, -5309.0061, 4195.4509, -2407.8342, 999.2335,
            -276.5767, 37.8298},
           {0.14397, -1.1345, 5.4393, -18.1782, 41.8715, -66.0764, 71.4213, -52.2851, 25.0496, -7.2277, 1},
           {25.079, 26.864, 33.6058, 45.022, 80.7856}),
    };

    b.controller.q = kQuarter;
    for (double g : {0.5298, 0.2105, 0.9427, 0.6789, 0.4455, 0.0012, 0.1828, 0.6630, 0.0303, 0.2878, 0.8228})
        b.controller.gains.push_back(g * 1e-4);
    return b;
}

// Hand-summed num(1)/den(1) for each discrete model, as exact fractions.
struct DcCheck {
    const char* label;
    double num_sum, den_sum;
};
constexpr DcCheck kDcChecks[] = {
    {"G30_100", 23707.0 / 5000, 51.0 / 2000}, {"G30_90", 7773.0 / 1000, 113.0 / 2500},
    {"G30_80", 107429.0 / 10000, 139.0 / 2000}, {"G30_70", 1359.0 / 250, 41.0 / 1000},
    {"G50_100", -4939.0 / 5000, 93.0 / 5000},   {"G50_90", 1273.0 / 1000, 139.0 / 5000},
    {"G50_80", 601.0 / 500, 1417.0 / 50000},    {"G50_70", 31833.0 / 10000, 423.0 / 5000},
};

// Constant terms (s^0) of each fractional model, numerator over denominator.
struct ConstCheck {
    const char* label;
    double num0, den0;
};
constexpr ConstCheck kConstChecks[] = {
    {"G30_100", 189.2362, 1}, {"G30_90", 171.3044, 1}, {"G30_80", 154.9787, 1}, {"G30_70", 133.1494, 1},
    {"G50_100", 51.8497, 1},  {"G50_90", 45.4763, 1},  {"G50_80", 41.4599, 1},  {"G50_70", 37.8298, 1},
};

constexpr double kControllerGainSum = 4.7953e-4;

} // namespace

const FixtureBank& builtin_fixtures() {
    static const FixtureBank bank = build();
    return bank;
}

std::vector<std::string> checksum_failures(const FixtureBank& bank) {
    std::vector<std::string> out;
    for (const auto& c : kDcChecks) {
        const auto* f = find_discrete(bank, c.label);
        if (!f) {
            out.push_back(std::string("missing discrete fixture ") + c.label);
            continue;
        }
        const double expect = c.num_sum / c.den_sum;
        double gain = 0.0;
        try {
            gain = f->model.dc_gain();
        } catch (const Error&) {
            gain = std::numeric_limits<double>::quiet_NaN();
        }
        if (!(std::abs(gain - expect) <= 1e-6 * std::abs(expect))) {
            std::ostringstream os;
            os << "discrete fixture " << c.label << ": dc gain " << gain << " != " << expect;
            out.push_back(os.str());
        }
    }
    for (const auto& c : kConstChecks) {
        const auto* f = find_fo(bank, c.label);
        if (!f) {
            out.push_back(std::string("missing fractional fixture ") + c.label);
            continue;
        }
        if (f->model.num()[0] != c.num0 || f->model.den()[0] != c.den0 || f->model.num_degree() != 10 ||
            f->model.den_degree() != 10 || f->model.q() != kQuarter) {
            out.push_back(std::string("fractional fixture ") + c.label + ": constant terms or shape differ");
        }
    }
    double gsum = 0.0;
    for (double g : bank.controller.gains) gsum += g;
    if (bank.controller.gains.size() != 11 || bank.controller.q != kQuarter ||
        !(std::abs(gsum - kControllerGainSum) <= 1e-9 * kControllerGainSum))
        out.push_back("controller fixture: gains differ");
    return out;
}

const DiscreteFixture* find_discrete(const FixtureBank& bank, std::string_view label) {
    for (const auto& f : bank.discrete)
        if (f.label == label) return &f;
    return nullptr;
}

const FoFixture* find_fo(const FixtureBank& bank, std::string_view label) {
    for (const auto& f : bank.fo)
        if (f.label == label) return &f;
    return nullptr;
}

std::vector<CommensurateFoTf> fo_plants(const FixtureBank& bank) {
    std::vector<CommensurateFoTf> out;
    for (const auto& f : bank.fo) out.push_back(f.model);
    return out;
}

std::vector<std::string> fo_labels(const FixtureBank& bank) {
    std::vector<std::string> out;
    for (const auto& f : bank.fo) out.push_back(f.label);
    return out;
}

void export_fixtures(const FixtureBank& bank, const std::filesystem::path& dir) {
    for (const auto& f : bank.discrete) write_file_atomic(dir / ("discrete_" + f.label + ".json"), serialize(f.model));
    for (const auto& f : bank.fo) write_file_atomic(dir / ("fo_" + f.label + ".json"), serialize(f.model));
    write_file_atomic(dir / "controller.json", control::serialize(bank.controller));
}

FixtureBank load_fixtures(const std::filesystem::path& dir) {
    FixtureBank b = builtin_fixtures();
    for (auto& f : b.discrete) {
        auto m = load_model(dir / ("discrete_" + f.label + ".json"));
        if (!std::holds_alternative<DiscreteTf>(m)) throw ArgumentError("fixture " + f.label + " is not discrete");
        f.model = std::get<DiscreteTf>(m);
    }
    for (auto& f : b.fo) {
        auto m = load_model(dir / ("fo_" + f.label + ".json"));
        if (!std::holds_alternative<CommensurateFoTf>(m))
            throw ArgumentError("fixture " + f.label + " is not fractional");
        f.model = std::get<CommensurateFoTf>(m);
    }
    b.controller = control::load_controller(dir / "controller.json");
    return b;
}

} // namespace fracid::app
