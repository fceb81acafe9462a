import os
import sys

# The build tree exports the module location; installed wheels don't need it.
module_dir = os.environ.get("TICKETCLASS_MODULE_DIR")
if module_dir and module_dir not in sys.path:
    sys.path.insert(0, module_dir)
package_dir = os.environ.get("TICKETCLASS_PACKAGE_DIR")
if package_dir and package_dir not in sys.path:
    sys.path.insert(0, package_dir)
