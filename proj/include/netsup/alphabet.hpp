#ifndef NETSUP_ALPHABET_HPP
#define NETSUP_ALPHABET_HPP

#include <algorithm>
#include <set>
#include <string>

#include "netsup/errors.hpp"

namespace netsup {

// Base alphabet Sigma with the controllable / observable / lossy subsets.
// sigma_uo and sigma_uc are derived, not stored.
struct AlphabetSpec {
    std::set<std::string> sigma;
    std::set<std::string> sigma_c;
    std::set<std::string> sigma_o;
    std::set<std::string> sigma_ol;

    void validate() const {
        auto subset = [](const std::set<std::string>& a, const std::set<std::string>& b) {
            return std::includes(b.begin(), b.end(), a.begin(), a.end());
        };
        if (!subset(sigma_c, sigma))
            throw Error(ErrorCode::INVALID_PARAMS, "sigma_c not a subset of sigma");
        if (!subset(sigma_o, sigma))
            throw Error(ErrorCode::INVALID_PARAMS, "sigma_o not a subset of sigma");
        if (!subset(sigma_ol, sigma_o))
            throw Error(ErrorCode::INVALID_PARAMS, "sigma_ol not a subset of sigma_o");
    }

    std::set<std::string> sigma_uo() const {
        std::set<std::string> out;
        for (const auto& e : sigma)
            if (!sigma_o.count(e)) out.insert(e);
        return out;
    }

    std::set<std::string> sigma_uc() const {
        std::set<std::string> out;
        for (const auto& e : sigma)
            if (!sigma_c.count(e)) out.insert(e);
        return out;
    }

    bool observable(const std::string& e) const { return sigma_o.count(e) != 0; }
    bool controllable(const std::string& e) const { return sigma_c.count(e) != 0; }
    bool lossy(const std::string& e) const { return sigma_ol.count(e) != 0; }
};

} // namespace netsup

#endif
