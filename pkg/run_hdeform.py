import sys

from hdeform.run_hdeform import main

if __name__ == '__main__':
    sys.exit(main())
