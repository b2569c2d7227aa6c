# emforge simplicial package
