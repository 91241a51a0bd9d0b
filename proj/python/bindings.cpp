#include <pybind11/pybind11.h>
PYBIND11_MODULE(_halfline, m) { m.doc() = "halfline bindings"; }
