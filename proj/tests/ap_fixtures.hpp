#pragma once

// Average precision frozen from scikit-learn's average_precision_score,
// which uses the same step form over distinct thresholds.

#include <vector>

namespace oracle {

struct ApFixture {
  std::vector<double> scores;
  std::vector<int> labels;
  double average_precision;
};

inline const std::vector<ApFixture>& ap_fixtures() {
  static const std::vector<ApFixture> fixtures = {
      {{0, 0, 1, 0, 0, 0.20000000000000001, 1, 0.40000000000000002, 0.20000000000000001}, {1, 0, 0, 0, 0, 1, 1, 1, 1}, 0.6644444444444445},
      {{0.0050000000000000001, 0.46500000000000002, 0.97599999999999998, 0.79900000000000004, 0.59699999999999998, 0.32500000000000001, 0.20599999999999999}, {0, 1, 1, 1, 1, 0, 0}, 1},
      {{0.80000000000000004, 0.40000000000000002, 1, 0.20000000000000001, 0.40000000000000002, 1, 0.59999999999999998, 0.20000000000000001, 0.40000000000000002, 0.80000000000000004, 0.40000000000000002, 0.40000000000000002, 0.40000000000000002, 0.40000000000000002, 0.40000000000000002, 1, 0.20000000000000001, 1}, {1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0}, 0.49591836734693878},
      {{0.372, 0.83399999999999996, 0.34899999999999998, 0.68200000000000005, 0.22800000000000001, 0.024, 0.69599999999999995, 0.33700000000000002}, {0, 0, 0, 1, 0, 0, 1, 1}, 0.55555555555555558},
      {{0.59999999999999998, 0.40000000000000002, 0.59999999999999998, 0.40000000000000002, 1, 1, 0.59999999999999998, 0, 0.40000000000000002, 0.20000000000000001, 0.59999999999999998, 0.59999999999999998, 0, 0.59999999999999998, 0, 0, 0, 0.20000000000000001}, {1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1}, 0.5138306138306139},
      {{0.436, 0.13500000000000001, 0.70299999999999996, 0.10100000000000001, 0.28000000000000003, 0.219, 0.13200000000000001, 0.54900000000000004, 0.19700000000000001, 0.751, 0.28000000000000003, 0.96799999999999997, 0.56499999999999995, 0.087999999999999995, 0.62, 0.20899999999999999, 0.378, 0.20799999999999999, 0.28399999999999997, 0.61299999999999999, 0.505, 0.02, 0.91700000000000004, 0.247, 0.48599999999999999, 0.128, 0.38400000000000001, 0.78200000000000003, 0.23899999999999999}, {0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 1, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1, 0, 0}, 0.31348547527162762},
      {{0.20000000000000001, 0.59999999999999998, 0.80000000000000004, 0.80000000000000004, 0.40000000000000002, 0, 1, 0.20000000000000001, 0.59999999999999998, 1, 1, 0.59999999999999998, 0.40000000000000002}, {1, 1, 1, 0, 1, 1, 1, 1, 1, 0, 0, 0, 1}, 0.55099715099715096},
      {{0.051999999999999998, 0.059999999999999998, 0.25900000000000001, 0.37, 0.56299999999999994, 0.90700000000000003, 0.23100000000000001, 0.14899999999999999}, {1, 0, 0, 0, 0, 0, 0, 1}, 0.20833333333333331},
      {{1, 0, 0.59999999999999998, 0.80000000000000004, 1, 0, 1, 0.59999999999999998, 0.20000000000000001, 0.20000000000000001, 0.20000000000000001}, {0, 1, 0, 1, 0, 1, 0, 0, 1, 1, 1}, 0.44570707070707072},
      {{0.83899999999999997, 0.627, 0.88900000000000001, 0.087999999999999995, 0.218, 0.90700000000000003, 0.17999999999999999, 0.083000000000000004, 0.39000000000000001, 0.71699999999999997, 0.59499999999999997, 0.53200000000000003, 0.74299999999999999}, {1, 0, 0, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1}, 0.76274558774558765},
      {{0.20000000000000001, 0.20000000000000001, 0.80000000000000004, 0, 0.80000000000000004, 0.20000000000000001, 0.80000000000000004, 1, 1, 0.40000000000000002, 1, 0.80000000000000004, 1, 1, 1, 0.80000000000000004, 0.40000000000000002, 1, 1, 0.40000000000000002, 0, 1, 0.59999999999999998, 0.20000000000000001, 0.20000000000000001, 0.20000000000000001, 0.40000000000000002, 0.80000000000000004, 0.20000000000000001, 1}, {0, 1, 1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1}, 0.47621741004093943},
      {{0.86499999999999999, 0.27500000000000002, 0.88100000000000001}, {1, 1, 1}, 1},
      {{0.59999999999999998, 1, 0, 0.59999999999999998, 0.20000000000000001, 0.59999999999999998, 1, 0.59999999999999998, 0.80000000000000004, 0.40000000000000002, 0.40000000000000002, 0.59999999999999998, 0.20000000000000001, 0.40000000000000002, 0.20000000000000001, 0.59999999999999998, 1, 0.59999999999999998, 0.40000000000000002, 0.59999999999999998, 0.20000000000000001, 1, 0.40000000000000002}, {0, 1, 0, 0, 1, 1, 1, 0, 1, 0, 0, 1, 0, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1}, 0.6008935508935509},
      {{0.127, 0.309, 0.70099999999999996, 0.20100000000000001, 0.75, 0.93799999999999994, 0.92900000000000005}, {0, 0, 0, 0, 0, 1, 1}, 1},
      {{0, 1, 0.20000000000000001, 0, 0.80000000000000004, 0.20000000000000001, 0, 0.59999999999999998, 0.20000000000000001, 0.80000000000000004, 1, 0.20000000000000001, 1, 0.80000000000000004, 0.80000000000000004, 0.59999999999999998, 0, 0.59999999999999998, 0.80000000000000004, 0.20000000000000001, 1}, {0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 1, 0, 0}, 0.31886087768440707},
      {{0.60899999999999999, 0.46899999999999997, 0.379, 0.0080000000000000002, 0.81499999999999995, 0.52000000000000002, 0.63, 0.27300000000000002, 0.52900000000000003, 0.035000000000000003, 0.48499999999999999, 0.52300000000000002, 0.29299999999999998}, {1, 0, 1, 0, 1, 1, 1, 1, 0, 0, 1, 0, 1}, 0.80936147186147189},
      {{0.80000000000000004, 0, 0.40000000000000002, 0.20000000000000001, 0.80000000000000004, 0.20000000000000001, 0.80000000000000004, 0, 0, 0.59999999999999998, 0.59999999999999998, 0.80000000000000004, 0.20000000000000001, 0, 1, 0.20000000000000001, 0.59999999999999998, 0.59999999999999998}, {0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 1, 1, 0, 0, 1}, 0.45736961451247166},
      {{0.76700000000000002, 0.503, 0.021999999999999999, 0.40200000000000002, 0.89400000000000002, 0.29599999999999999, 0.155, 0.0089999999999999993, 0.56899999999999995, 0.216, 0.33000000000000002, 0.78000000000000003, 0.88900000000000001, 0.23400000000000001, 0.192, 0.28899999999999998, 0.95799999999999996, 0.01, 0.74099999999999999, 0.94499999999999995, 0.34599999999999997, 0.184, 0.84899999999999998, 0.158, 0.72499999999999998, 0.96299999999999997, 0.36299999999999999, 0.091999999999999998}, {0, 1, 1, 0, 0, 1, 1, 1, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0}, 0.31430320177123244},
      {{0.40000000000000002, 0.59999999999999998, 0.80000000000000004, 0, 0.20000000000000001, 0.59999999999999998, 0.59999999999999998, 0}, {1, 0, 1, 1, 0, 1, 0, 0}, 0.65000000000000002},
      {{0.23699999999999999, 0.31, 0.32200000000000001, 0.312, 0.77600000000000002, 0.035000000000000003}, {0, 1, 0, 1, 0, 0}, 0.41666666666666663},
      {{0.59999999999999998, 0.59999999999999998, 0, 0, 0, 1, 0.20000000000000001, 0, 0.59999999999999998, 0, 0}, {0, 1, 1, 1, 0, 0, 1, 0, 1, 0, 1}, 0.53939393939393931},
      {{0.59299999999999997, 0.099000000000000005, 0.40999999999999998, 0.21199999999999999, 0.58499999999999996, 0.51900000000000002, 0.050999999999999997, 0.45300000000000001, 0.745, 0.34899999999999998, 0.628, 0.34599999999999997, 0.072999999999999995, 0.123, 0.017999999999999999, 0.039, 0.68899999999999995}, {0, 1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 1, 1, 1, 0, 1, 0}, 0.39831730769230766},
      {{0.20000000000000001, 0.20000000000000001, 0, 0, 1, 0.59999999999999998, 0.20000000000000001, 1, 1, 0.40000000000000002, 1, 0.20000000000000001, 0.59999999999999998, 0.20000000000000001, 0.80000000000000004, 0.59999999999999998, 0.20000000000000001, 0, 0.40000000000000002, 0.40000000000000002, 1}, {1, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 0, 0, 0, 1, 0, 0, 1}, 0.76404151404151399},
      {{0.14599999999999999, 0.56599999999999995, 0.90700000000000003, 0.14599999999999999, 0.68300000000000005, 0.39000000000000001, 0.76900000000000002, 0.61299999999999999, 0.40799999999999997, 0.495, 0.067000000000000004, 0.749, 0.32600000000000001, 0.96699999999999997, 0.88}, {1, 0, 0, 0, 1, 1, 1, 0, 0, 1, 0, 1, 0, 1, 1}, 0.74055735930735933},
      {{0, 0.59999999999999998, 0, 0.40000000000000002, 1, 0.59999999999999998, 0.40000000000000002, 0.80000000000000004, 0, 0.20000000000000001, 0.20000000000000001, 0, 0, 0.20000000000000001, 0.40000000000000002}, {0, 1, 1, 1, 0, 1, 1, 0, 1, 1, 0, 1, 0, 0, 1}, 0.61587301587301591},
      {{0.81399999999999995, 0.20399999999999999, 0.745, 0.71499999999999997, 0.31, 0.54200000000000004, 0.92700000000000005, 0.252, 0.80300000000000005, 0.58999999999999997, 0.22500000000000001, 0.48699999999999999, 0.189, 0.53700000000000003, 0.59099999999999997, 0.80800000000000005, 0.70099999999999996, 0.085999999999999993, 0.73599999999999999, 0.29399999999999998, 0.249, 0.90200000000000002, 0.92700000000000005, 0.307, 0.19400000000000001, 0.48499999999999999, 0.36099999999999999}, {0, 0, 0, 0, 1, 0, 1, 1, 0, 1, 0, 1, 0, 0, 0, 1, 1, 1, 1, 1, 1, 0, 1, 0, 1, 1, 1}, 0.59863514698808817},
      {{0.59999999999999998, 1, 1, 0, 0.59999999999999998, 0.80000000000000004, 0.80000000000000004, 0.20000000000000001, 0.80000000000000004}, {0, 1, 0, 0, 1, 1, 1, 0, 0}, 0.56785714285714284},
      {{0.78400000000000003, 0.16500000000000001, 0.072999999999999995, 0.32100000000000001, 0.67300000000000004, 0.122, 0.86299999999999999, 0.97199999999999998, 0.64800000000000002, 0.72799999999999998, 0.17399999999999999, 0.63600000000000001, 0.97399999999999998, 0.92700000000000005, 0.34300000000000003}, {1, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 0}, 0.45017442874585734},
      {{0.40000000000000002, 1, 0.20000000000000001, 0.59999999999999998, 0.40000000000000002, 0.20000000000000001, 0.40000000000000002, 0.80000000000000004, 0.40000000000000002, 0.59999999999999998, 0.59999999999999998, 0.20000000000000001, 1, 1, 0.40000000000000002, 0, 0.59999999999999998, 0.80000000000000004}, {1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1, 1, 0, 1, 0, 1}, 0.51541950113378676},
      {{0.746, 0.75800000000000001, 0.67300000000000004, 0.113, 0.83299999999999996}, {0, 1, 1, 0, 1}, 0.91666666666666652},
      {{1, 0.80000000000000004, 0.80000000000000004, 0.59999999999999998, 0.80000000000000004, 0.40000000000000002, 0.80000000000000004, 0.80000000000000004, 0.59999999999999998, 0.40000000000000002, 1, 0.80000000000000004, 0.59999999999999998, 0.80000000000000004, 0.59999999999999998, 1, 0.59999999999999998, 1, 0.59999999999999998, 1, 0.80000000000000004, 0.40000000000000002, 0.59999999999999998, 0.80000000000000004, 0.20000000000000001, 1, 0.20000000000000001, 1, 0.80000000000000004, 0.20000000000000001}, {1, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0, 1, 1, 1, 1, 0, 0, 0, 1, 1, 1, 0, 1, 1, 1, 1, 1, 0, 0}, 0.56127596872082164},
      {{0.64000000000000001, 0.70399999999999996, 0.16, 0.82299999999999995, 0.42199999999999999, 0.71399999999999997, 0.29499999999999998, 0.70299999999999996, 0.065000000000000002, 0.90300000000000002, 0.57099999999999995, 0.873, 0.16200000000000001, 0.31, 0.73999999999999999, 0.107}, {1, 1, 0, 0, 1, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1}, 0.50381054131054126},
      {{0.20000000000000001, 1, 0.59999999999999998, 0.59999999999999998, 0.20000000000000001, 0.80000000000000004, 0.20000000000000001, 0.80000000000000004, 1, 0.20000000000000001, 0, 0.59999999999999998}, {0, 1, 1, 0, 0, 0, 1, 0, 0, 0, 1, 1}, 0.42748917748917747},
      {{0.88700000000000001, 0.109, 0.97999999999999998, 0.82999999999999996, 0.61099999999999999, 0.035000000000000003, 0.78800000000000003, 0.254, 0.88, 0.68899999999999995, 0.42399999999999999}, {0, 1, 0, 1, 0, 0, 1, 0, 1, 0, 1}, 0.48666666666666664},
      {{0.59999999999999998, 0.40000000000000002, 0.80000000000000004, 0, 0, 0.59999999999999998, 0.80000000000000004, 0.40000000000000002, 0.20000000000000001, 0.59999999999999998, 0.40000000000000002, 0.20000000000000001, 0, 0.20000000000000001, 0.20000000000000001, 1, 0.59999999999999998, 0.40000000000000002}, {0, 1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 1, 0, 0, 1, 0, 0, 0}, 0.61886396431850976},
      {{0.216, 0.29699999999999999, 0.63500000000000001, 0.121, 0.90900000000000003, 0.47099999999999997, 0.84099999999999997, 0.89000000000000001, 0.36499999999999999, 0.080000000000000002, 0.30499999999999999, 0.087999999999999995, 0.93500000000000005, 0.73999999999999999, 0.77700000000000002, 0.752, 0.20999999999999999, 0.85399999999999998, 0.70799999999999996, 0.55100000000000005, 0.97799999999999998, 0.89500000000000002, 0.66500000000000004, 0.94299999999999995}, {0, 1, 1, 1, 1, 1, 0, 0, 0, 1, 0, 0, 1, 1, 1, 0, 1, 1, 1, 0, 1, 0, 1, 0}, 0.63430705676946275},
      {{1, 0.40000000000000002, 0.80000000000000004, 0.40000000000000002, 1, 1, 0.20000000000000001, 1, 0.20000000000000001, 1, 1, 0.20000000000000001, 1, 0.40000000000000002, 0, 0.20000000000000001, 0.20000000000000001, 0.59999999999999998, 0.20000000000000001, 0, 0.59999999999999998, 1, 0.40000000000000002, 0.80000000000000004, 0.40000000000000002, 0, 1, 0.59999999999999998}, {0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0}, 0.41980785296574769},
      {{0.46300000000000002, 0.83399999999999996, 0.61399999999999999}, {1, 1, 0}, 0.83333333333333326},
      {{1, 0, 0.20000000000000001, 0, 1, 0.40000000000000002, 0.40000000000000002, 1, 0.20000000000000001, 0.20000000000000001, 0.40000000000000002, 0.20000000000000001, 0.40000000000000002, 0.59999999999999998, 0.80000000000000004, 0.80000000000000004}, {1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 1, 1, 1, 1, 0, 1}, 0.66915584415584417},
      {{0.40300000000000002, 0.92800000000000005, 0.13900000000000001, 0.84999999999999998, 0.99199999999999999, 0.40999999999999998, 0.70199999999999996, 0.106, 0.074999999999999997, 0.47999999999999998, 0.94199999999999995, 0.19500000000000001, 0.13600000000000001, 0.050999999999999997, 0.85999999999999999, 0.93899999999999995, 0.93100000000000005, 0.184, 0.34899999999999998, 0.67900000000000005, 0.83999999999999997}, {0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0}, 0.41959829386299974},
      {{0.59999999999999998, 0.20000000000000001, 0.40000000000000002, 0.20000000000000001, 0.80000000000000004, 0.40000000000000002, 0.40000000000000002, 0.59999999999999998, 0.80000000000000004, 1, 0, 1, 0.59999999999999998, 0, 0, 0.80000000000000004, 0.80000000000000004, 1, 0.40000000000000002}, {1, 0, 1, 1, 1, 1, 0, 0, 1, 1, 1, 0, 1, 0, 1, 0, 0, 0, 0}, 0.47431077694235585},
      {{0.121, 0.871, 0.93100000000000005, 0.217, 0.080000000000000002, 0.51500000000000001, 0.94499999999999995, 0.062, 0.45400000000000001, 0.13900000000000001, 0.72899999999999998, 0.30399999999999999, 0.214, 0.25700000000000001, 0.84099999999999997, 0.42599999999999999, 0.76500000000000001, 0.36699999999999999, 0.38200000000000001, 0.91100000000000003, 0.56299999999999994, 0.0070000000000000001, 0.32600000000000001, 0.185, 0.90700000000000003, 0.113}, {1, 0, 1, 0, 0, 1, 1, 0, 1, 1, 0, 1, 0, 1, 0, 0, 1, 1, 0, 1, 1, 0, 0, 0, 1, 0}, 0.76042144130379419},
      {{1, 0.40000000000000002, 0.40000000000000002, 0.80000000000000004, 0.40000000000000002, 0.59999999999999998, 0.20000000000000001, 1, 0.59999999999999998, 0.80000000000000004}, {0, 1, 1, 0, 1, 1, 0, 0, 1, 1}, 0.54166666666666663},
      {{0.040000000000000001, 0.024, 0.88100000000000001, 0.048000000000000001, 0.92500000000000004, 0.33400000000000002, 0.27400000000000002, 0.22900000000000001, 0.40799999999999997, 0.85299999999999998, 0.247}, {1, 1, 1, 0, 1, 1, 0, 1, 0, 1, 0}, 0.80876623376623358},
      {{0.59999999999999998, 0.80000000000000004, 0.80000000000000004, 0.80000000000000004, 0.80000000000000004, 0.80000000000000004, 0, 0.59999999999999998, 1, 0.59999999999999998, 0.40000000000000002, 0.40000000000000002, 0.20000000000000001, 0.40000000000000002, 1, 0.80000000000000004, 0.80000000000000004, 0.40000000000000002, 1, 0, 0.40000000000000002, 1, 1, 1, 1, 0.40000000000000002, 0.20000000000000001, 0.20000000000000001}, {1, 1, 0, 0, 1, 1, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 1, 0}, 0.56615451364492286},
      {{0.27900000000000003, 0.113, 0.63900000000000001, 0.63400000000000001, 0.64900000000000002, 0.89300000000000002, 0.20200000000000001, 0.59199999999999997, 0.79300000000000004, 0.33900000000000002, 0.98599999999999999, 0.93799999999999994, 0.0040000000000000001, 0.95399999999999996, 0.54000000000000004}, {1, 0, 0, 1, 1, 1, 1, 0, 0, 1, 1, 1, 0, 0, 1}, 0.7004079254079254},
      {{0.40000000000000002, 0.40000000000000002, 1, 0.59999999999999998, 0.40000000000000002, 0, 0.59999999999999998, 1, 0.80000000000000004, 0, 0.80000000000000004, 0.80000000000000004, 0.80000000000000004, 0.40000000000000002, 0.20000000000000001, 0.20000000000000001, 0.80000000000000004, 0, 0.20000000000000001, 0, 0.40000000000000002, 0.80000000000000004, 0.20000000000000001, 1, 1, 0.80000000000000004, 1, 0.59999999999999998}, {0, 0, 1, 1, 0, 1, 1, 0, 0, 0, 1, 1, 1, 0, 1, 1, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 1, 0}, 0.43745421245421245},
      {{0.128, 0.748, 0.88500000000000001, 0.82199999999999995, 0.035999999999999997, 0.61099999999999999, 0.26000000000000001, 0.64200000000000002, 0.69499999999999995, 0.23999999999999999, 0.0070000000000000001, 0.69699999999999995, 0.80600000000000005}, {1, 1, 0, 1, 1, 1, 1, 0, 1, 0, 1, 1, 0}, 0.61707459207459214},
      {{0.59999999999999998, 0.20000000000000001, 0, 0.20000000000000001, 0.20000000000000001, 0.80000000000000004, 1, 0.20000000000000001, 0, 1, 0.20000000000000001, 1, 0.80000000000000004, 0.80000000000000004, 0.59999999999999998, 0.20000000000000001, 0.20000000000000001, 0.59999999999999998, 0.40000000000000002, 1, 0.59999999999999998, 0.40000000000000002, 1, 0, 0.40000000000000002, 0, 0}, {0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 0, 0, 1, 1, 1, 1, 0, 1, 1}, 0.50474987974987973},
      {{0.41999999999999998, 0.47599999999999998, 0.94799999999999995, 0.69399999999999995, 0.69399999999999995, 0.95199999999999996, 0.46999999999999997, 0.46700000000000003, 0.45400000000000001, 0.76700000000000002, 0.91700000000000004, 0.55600000000000005, 0.67300000000000004}, {0, 1, 1, 0, 1, 0, 0, 0, 0, 1, 1, 1, 0}, 0.64583333333333337},
  };
  return fixtures;
}

}  // namespace oracle
