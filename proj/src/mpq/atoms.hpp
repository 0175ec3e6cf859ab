// Interned symbol table for exponent atoms.
//
// Atom 0 is always the distinguished symbol "unit": q is the formal
// exponential of unit, so a plain power q^r is represented by the
// exponent polynomial r*unit.  Every other atom is an independent
// deformation parameter (p_{i,j}, twist entries, free symbols, ...).
#pragma once

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpq {

using AtomId = int;

class AtomTable {
public:
    static constexpr AtomId kUnit = 0;

    static AtomId intern(const std::string& name) {
        auto& self = instance();
        std::lock_guard<std::mutex> lock(self.mutex_);
        auto it = self.by_name_.find(name);
        if (it != self.by_name_.end()) return it->second;
        AtomId id = static_cast<AtomId>(self.names_.size());
        self.names_.push_back(name);
        self.by_name_.emplace(name, id);
        return id;
    }

    static std::string name(AtomId id) {
        auto& self = instance();
        std::lock_guard<std::mutex> lock(self.mutex_);
        if (id < 0 || id >= static_cast<AtomId>(self.names_.size()))
            throw std::out_of_range("unknown atom id");
        return self.names_[id];
    }

private:
    AtomTable() {
        names_.push_back("unit");
        by_name_.emplace("unit", kUnit);
    }
    static AtomTable& instance() {
        static AtomTable table;
        return table;
    }

    std::mutex mutex_;
    std::vector<std::string> names_;
    std::map<std::string, AtomId> by_name_;
};

inline AtomId unit_atom() { return AtomTable::kUnit; }

// Canonical name for the deformation parameter p_{i,j} (1-based, i < j).
inline AtomId p_atom(int i, int j) {
    if (!(1 <= i && i < j))
        throw std::invalid_argument("p-atom requires 1 <= i < j");
    return AtomTable::intern("p_{" + std::to_string(i) + "," + std::to_string(j) + "}");
}

inline AtomId named_atom(const std::string& name) { return AtomTable::intern(name); }

} // namespace mpq
