#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "orq/game.hpp"

namespace orq::cli {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kPrecondition = 3, kCheckFailed = 4 };

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "triangle[:cT]", "bnf[:cT]", "nested[:k]", "clique-fill:v", "random:pool",
/// "red-greedy:pool", "branching", "fresh-pairs". p and the target feed the
/// query builders, m and n the branching builder.
std::unique_ptr<BuilderPolicy> make_builder(const std::string& desc, double p,
                                            const SimpleGraph& target, int m, int n);

/// "random", "all-red", "all-blue", "alteration[:r]".
std::unique_ptr<PainterPolicy> make_painter(const std::string& desc, double p, int n,
                                            std::uint64_t seed);

}  // namespace orq::cli
