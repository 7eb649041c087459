#ifndef URV_URV_HPP
#define URV_URV_HPP

// Umbrella header. io.hpp is left out because it pulls in nlohmann/json.

#include "cpqr.hpp"
#include "diagnostics.hpp"
#include "error.hpp"
#include "factorizations.hpp"
#include "matrix.hpp"
#include "qr.hpp"
#include "random.hpp"
#include "svd.hpp"
#include "test_matrices.hpp"
#include "version.hpp"

#endif // URV_URV_HPP
