#include <pybind11/pybind11.h>
PYBIND11_MODULE(_gcms, m) { m.doc() = "placeholder"; }
