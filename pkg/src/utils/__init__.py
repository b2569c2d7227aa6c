# emforge utils package
