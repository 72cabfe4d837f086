#pragma once

#include <stdexcept>

namespace amenable {

// A configured size limit (matrix size, enumeration bits, family size) was hit.
class ResourceCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace amenable
