#include <iostream>

#include "acceptance.hpp"

int main() { return dp::acceptance::run_all(std::cout); }
