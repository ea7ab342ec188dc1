from vnfree.cli import entry

entry()
