#pragma once

#include <functional>
#include <string>

namespace fluctwork {

// Non-fatal warnings (merged grid values, backward kernel of a kernel that is
// not Gibbs-stochastic, ...). The default sink writes to stderr.
using WarningSink = std::function<void(const std::string&)>;

// Installs a sink and returns the previous one. Passing an empty function silences warnings.
WarningSink set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace fluctwork
