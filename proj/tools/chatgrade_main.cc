#include <string>
#include <vector>

#include "chatgrade/cli.h"

int main(int argc, char** argv) {
  return chatgrade::run(std::vector<std::string>(argv, argv + argc));
}
