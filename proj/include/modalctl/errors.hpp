#pragma once

#include <stdexcept>
#include <string>

namespace modalctl {

class InvalidArgument : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

// Raised when a value would leave the double range instead of returning Inf.
class RangeOverflow : public std::overflow_error {
   public:
    using std::overflow_error::overflow_error;
};

// The argument-principle integrand is too large on the contour: a root sits
// on or next to the boundary. Callers should perturb the region.
class BoundaryTooClose : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
   public:
    QuadratureError(const std::string& what, double worst_lo, double worst_hi)
        : std::runtime_error(what), worst_lo_(worst_lo), worst_hi_(worst_hi) {}
    double worst_lo() const { return worst_lo_; }
    double worst_hi() const { return worst_hi_; }

   private:
    double worst_lo_;
    double worst_hi_;
};

class IllConditionedFamily : public std::runtime_error {
   public:
    IllConditionedFamily(const std::string& what, double margin)
        : std::runtime_error(what), margin_(margin) {}
    double margin() const { return margin_; }

   private:
    double margin_;
};

// Model-file violation; path() is a JSON path such as "$.modes[1].lambda".
class SchemaError : public std::runtime_error {
   public:
    SchemaError(const std::string& path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(path) {}
    const std::string& path() const { return path_; }

   private:
    std::string path_;
};

}  // namespace modalctl
