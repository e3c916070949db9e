// Copyright 2026 The Mechpoly Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MECHPOLY_ERRORS_H_
#define MECHPOLY_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace mechpoly {

// Base class of every error raised by the library. The CLI maps
// InputError to exit code 2 and NumericalFailure to exit code 3; every
// other MechpolyError is treated as an input problem as well.
class MechpolyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed files, inconsistent dimensions, indices out of range.
class InputError : public MechpolyError {
 public:
  using MechpolyError::MechpolyError;
};

class NumericalFailure : public MechpolyError {
 public:
  using MechpolyError::MechpolyError;
};

class ZeroProbabilityType : public MechpolyError {
 public:
  ZeroProbabilityType(int agent, int type)
      : MechpolyError("type " + std::to_string(type) + " of agent " +
                      std::to_string(agent) + " has zero prior mass"),
        agent_(agent),
        type_(type) {}
  int agent() const { return agent_; }
  int type() const { return type_; }

 private:
  int agent_;
  int type_;
};

// Raised by DecomposeSeparable. Carries the (action profile, type profile)
// cell with the largest least-squares residual.
class NotSeparable : public MechpolyError {
 public:
  NotSeparable(int action_profile, int type_profile, double residual)
      : MechpolyError("payoff table is not separable: residual " +
                      std::to_string(residual) + " at action profile " +
                      std::to_string(action_profile) + ", type profile " +
                      std::to_string(type_profile)),
        action_profile_(action_profile),
        type_profile_(type_profile),
        residual_(residual) {}
  int action_profile() const { return action_profile_; }
  int type_profile() const { return type_profile_; }
  double residual() const { return residual_; }

 private:
  int action_profile_;
  int type_profile_;
  double residual_;
};

class DimensionTooLarge : public MechpolyError {
 public:
  using MechpolyError::MechpolyError;
};

class ModeUnsupported : public MechpolyError {
 public:
  using MechpolyError::MechpolyError;
};

class SelectionSpaceTooLarge : public MechpolyError {
 public:
  using MechpolyError::MechpolyError;
};

class MenuEntryNotBic : public MechpolyError {
 public:
  using MechpolyError::MechpolyError;
};

class TooFewAgents : public MechpolyError {
 public:
  using MechpolyError::MechpolyError;
};

class NotBic : public MechpolyError {
 public:
  using MechpolyError::MechpolyError;
};

class DeviationSetEmpty : public MechpolyError {
 public:
  using MechpolyError::MechpolyError;
};

}  // namespace mechpoly

#endif  // MECHPOLY_ERRORS_H_
