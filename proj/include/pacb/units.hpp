#pragma once

// Power and ratio conversions. Everything inside the library is linear
// (watts, plain ratios); dB domains only appear at the I/O boundary.

namespace pacb::units {

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);  // 0 W maps to -inf dBm
double db_to_linear(double db);
double linear_to_db(double ratio);

}  // namespace pacb::units
