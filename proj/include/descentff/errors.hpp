/*
   Copyright 2026 the descentff authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef DESCENTFF_ERRORS_HPP
#define DESCENTFF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace descentff {

// Every library error derives from Error; the what() string is prefixed with
// the concrete type name so reports and logs can be grepped by failure kind.
class Error : public std::runtime_error {
 public:
  Error(const std::string& kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg) {}
};

#define DESCENTFF_DEFINE_ERROR(Name)                              \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& msg) : Error(#Name, msg) {}  \
  }

DESCENTFF_DEFINE_ERROR(NotSixthPowerFree);
DESCENTFF_DEFINE_ERROR(NotCoprime);
DESCENTFF_DEFINE_ERROR(NoZeta3);
DESCENTFF_DEFINE_ERROR(DegreeTooLarge);
DESCENTFF_DEFINE_ERROR(DegenerateCurve);
DESCENTFF_DEFINE_ERROR(HypothesisViolated);
DESCENTFF_DEFINE_ERROR(PreconditionUnmet);
DESCENTFF_DEFINE_ERROR(InfinitePoint);
DESCENTFF_DEFINE_ERROR(SearchTooLarge);
DESCENTFF_DEFINE_ERROR(GenusTooLarge);
DESCENTFF_DEFINE_ERROR(TypeNotCovered);
DESCENTFF_DEFINE_ERROR(ZeroFunction);
DESCENTFF_DEFINE_ERROR(InternalError);

#undef DESCENTFF_DEFINE_ERROR

}  // namespace descentff

#endif  // DESCENTFF_ERRORS_HPP
