# emforge command-line package
